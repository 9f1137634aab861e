#pragma once

#include "pmdyn/real.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pmdyn {

using Symbol = int;  // 1-based branch index

/// Subinterval of [0,1] with explicit endpoint closedness.
struct Interval {
  Real lo;
  Real hi;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval closed(Real lo, Real hi) { return {std::move(lo), std::move(hi), true, true}; }
  static Interval open(Real lo, Real hi) { return {std::move(lo), std::move(hi), false, false}; }
  static Interval empty_set() { return {Real(1), Real(0), true, true}; }

  bool empty() const;
  Real length() const { return empty() ? Real(0) : hi - lo; }
  Interval closure() const { return closed(lo, hi); }
  bool contains(const Real& x) const;

  /// Empty under the policy's tolerance (lo beyond hi).
  bool empty(const NumericPolicy& p) const;
  /// Nonempty with length at most the comparison tolerance (exactly a point
  /// in exact mode).
  bool degenerate(const NumericPolicy& p) const;
  bool positive_length(const NumericPolicy& p) const { return !empty(p) && !degenerate(p); }
  Real midpoint() const { return (lo + hi) / Real(2); }

  std::string str() const;
};

/// Intersection of two closed intervals (closedness is not tracked).
Interval intersect_closed(const Interval& a, const Interval& b);

/// One monotone continuous piece of the map. The formula is valid on the
/// closure of `domain`, so one-sided limits at the endpoints are branch values.
class Branch {
public:
  struct Affine {
    Real slope;
    Real intercept;
  };
  /// Piecewise linear interpolation through strictly monotone samples whose
  /// abscissae span the closure of the domain.
  struct Tabulated {
    std::vector<Real> xs;
    std::vector<Real> ys;
  };

  Branch(Interval domain, Affine affine);
  Branch(Interval domain, Tabulated table);

  const Interval& domain() const { return domain_; }
  bool increasing() const { return increasing_; }
  bool is_affine() const { return std::holds_alternative<Affine>(kind_); }
  const Affine& affine() const { return std::get<Affine>(kind_); }
  const Tabulated& table() const { return std::get<Tabulated>(kind_); }

  /// Value at any x in the closure of the domain.
  Real value(const Real& x) const;
  /// Closed image of the closure of the domain.
  Interval image() const;
  /// Closed image of a closed subinterval of cl(domain).
  Interval image_of(const Interval& j) const;
  /// x in cl(domain) with value(x) = y; requires y in image().
  Real inverse(const Real& y) const;
  /// Minimal absolute slope over the branch.
  double min_abs_slope() const;

private:
  Interval domain_;
  std::variant<Affine, Tabulated> kind_;
  bool increasing_ = true;
};

struct BetaSpec {
  Real beta;
};
struct LinearModOneSpec {
  Real beta;
  Real alpha;
};
struct TentSpec {
  Real slope;
};
struct AffinePiecesSpec {
  std::vector<Real> endpoints;
  std::vector<Real> slopes;
  std::vector<Real> intercepts;
  std::vector<Real> boundary_images;  // empty means left-limit default
};
using MapSpec = std::variant<BetaSpec, LinearModOneSpec, TentSpec, AffinePiecesSpec>;

struct OrbitRecord {
  std::vector<Real> points;
  std::optional<std::size_t> hit_boundary_at;
};

/// Piecewise monotonic self-map of [0,1]. Immutable after construction.
class PiecewiseMonotonicMap {
public:
  /// Validates and builds a map. `boundary_images` may be empty, in which case
  /// each endpoint takes the left one-sided limit (right limit at 0).
  PiecewiseMonotonicMap(std::vector<Real> endpoints, std::vector<Branch> branches,
                        std::vector<Real> boundary_images = {}, std::string description = {});

  int k() const { return static_cast<int>(branches_.size()); }
  const std::vector<Real>& endpoints() const { return endpoints_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(Symbol j) const { return branches_.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<Real>& boundary_images() const { return boundary_images_; }
  const NumericPolicy& policy() const { return policy_; }
  bool exact() const { return policy_.exact; }
  const std::string& description() const { return description_; }

  /// cl(I_j) for symbol j.
  Interval partition_closure(Symbol j) const;
  /// Index of the endpoint equal to x (within tolerance), if any.
  std::optional<std::size_t> endpoint_index(const Real& x) const;
  /// Symbol j with x in the open interval I_j; absent for endpoints.
  std::optional<Symbol> symbol_of(const Real& x) const;

  /// Largest contraction factor of the inverse branches (1 / min |slope|).
  double inverse_contraction() const;

  /// Same map with every parameter converted to double.
  PiecewiseMonotonicMap to_float() const;

private:
  std::vector<Real> endpoints_;
  std::vector<Branch> branches_;
  std::vector<Real> boundary_images_;
  NumericPolicy policy_;
  std::string description_;
};

PiecewiseMonotonicMap make_map(const MapSpec& spec);

/// Float mode: moves interval endpoints lying within the dedup tolerance of a
/// partition endpoint onto it. Identity in exact mode.
Interval snap_to_partition(const PiecewiseMonotonicMap& map, Interval j);

Real evaluate(const PiecewiseMonotonicMap& map, const Real& x);
OrbitRecord iterate_orbit(const PiecewiseMonotonicMap& map, const Real& x, std::size_t n);
std::vector<Symbol> itinerary(const PiecewiseMonotonicMap& map, const Real& x, std::size_t n);
std::optional<Real> inverse_branch(const PiecewiseMonotonicMap& map, Symbol j, const Real& y);

/// Conjugates T restricted to an invariant subinterval J back onto [0,1] by
/// the affine chart x -> (x - lo) / (hi - lo). Throws if J is not invariant.
struct RestrictedMap {
  PiecewiseMonotonicMap map;
  Interval component;
  std::vector<Symbol> origin_symbol;  // restricted symbol -> original symbol

  Real to_original(const Real& y) const { return component.lo + (component.hi - component.lo) * y; }
};
RestrictedMap restrict_map(const PiecewiseMonotonicMap& map, const Interval& component);

}  // namespace pmdyn
