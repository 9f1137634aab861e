#pragma once

#include "pmdyn/diagram.hpp"
#include "pmdyn/entropy.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pmdyn {

/// Continuous function on [0,1] or a locally constant function of the first
/// `depth()` symbols.
class Observable {
public:
  enum class Kind { Identity, Constant, PiecewiseLinear, Symbolic, Callable };

  static Observable identity();
  static Observable constant(Real c);
  /// Linear interpolation through (xs[i], ys[i]); xs strictly increasing from
  /// 0 to 1.
  static Observable piecewise_linear(std::vector<Real> xs, std::vector<Real> ys);
  /// 1 on words starting with w, 0 elsewhere.
  static Observable indicator(Word w);
  /// Table over words of length depth; missing words take `otherwise`.
  static Observable symbolic(std::size_t depth, std::map<Word, Real> table, Real otherwise = Real(0));
  static Observable callable(std::function<double(double)> f, double lipschitz, double lo, double hi,
                             std::string name = "callable");

  /// "x", "const:<c>", "indicator:<word>", "pl:x0:y0,x1:y1,...".
  static Observable parse(std::string_view text, int k);

  Kind kind() const { return kind_; }
  bool is_symbolic() const { return kind_ == Kind::Symbolic; }
  std::size_t depth() const { return depth_; }
  /// Real-valued kinds.
  Real value(const Real& x) const;
  /// Symbolic kind; w must have at least depth() symbols.
  Real value(const Word& w) const;
  double lipschitz() const { return lipschitz_; }
  /// sup - inf over the domain.
  double oscillation() const { return hi_ - lo_; }
  const std::string& description() const { return description_; }

  /// Observable on a restricted map: composition with the chart back to the
  /// original coordinates, or relabelling of the symbolic table.
  Observable transported(const RestrictedMap& r) const;

private:
  Kind kind_ = Kind::Identity;
  std::size_t depth_ = 0;
  std::vector<Real> xs_, ys_;
  Real constant_;
  std::map<Word, Real> table_;
  Real otherwise_;
  std::function<double(double)> fn_;
  double lipschitz_ = 1.0;
  double lo_ = 0.0, hi_ = 1.0;
  std::string description_ = "x";
};

struct PeriodicOrbit {
  Word word;
  Real point;
  std::vector<Real> orbit;  // point, T(point), ..., T^{p-1}(point)
  bool boundary = false;    // some orbit point is a partition endpoint
};

/// Primitive words w, |w| <= max_period, least in their rotation class, with
/// positive-length cylinder and T^p([w]) covering [w]. Lexicographic order.
/// Words coding boundary orbits are included (see realize_periodic_point).
/// Throws BudgetExceeded.
std::vector<Word> find_periodic_words(const PiecewiseMonotonicMap& map, std::size_t max_period,
                                      std::uint64_t budget = kDefaultEnumerationBudget);

/// Fixed point of the composed inverse branches along w and its orbit,
/// computed backwards from the fixed point. Exact for affine branches in
/// exact mode. Throws NoFixedPoint.
PeriodicOrbit realize_periodic_point(const PiecewiseMonotonicMap& map, const Word& w);

/// Realised orbits of find_periodic_words, in the same order.
std::vector<PeriodicOrbit> periodic_catalog(const PiecewiseMonotonicMap& map, std::size_t max_period,
                                            std::uint64_t budget = kDefaultEnumerationBudget);

/// Integral against the uniform measure on the orbit. Symbolic observables
/// are evaluated on the rotations of the word.
Real integral(const PeriodicOrbit& mu, const Observable& phi);

/// (1/n) sum_{j<n} phi(T^j x). Throws BoundaryHit for symbolic observables
/// whose itinerary reaches an endpoint.
Real birkhoff_average(const PiecewiseMonotonicMap& map, const Real& x, const Observable& phi, std::size_t n);

struct Spread {
  Real min;
  Real max;
  Word argmin;
  Word argmax;
  std::size_t orbits = 0;
  Real width() const { return max - min; }
};

/// Range of periodic integrals up to max_period. Boundary orbits are skipped
/// unless include_boundary is set. Throws NoPeriodicOrbits.
Spread average_spread(const PiecewiseMonotonicMap& map, const Observable& phi, std::size_t max_period,
                      bool include_boundary = false);

/// Maximal-entropy Markov measure on a strongly connected subdiagram.
struct StationaryMarkovMeasure {
  SubDiagram subdiagram;
  double rho = 0.0;
  std::vector<std::vector<double>> transition;  // local indices
  std::vector<double> stationary;

  double entropy() const;
};

/// Throws NotStronglyConnected, NonConvergence.
StationaryMarkovMeasure parry_measure(const SubDiagram& s);

/// Integral of phi against the projection of the Markov measure. Symbolic
/// observables are summed exactly over paths of length depth(); real
/// observables are evaluated at cylinder midpoints of projected paths, using
/// the longest path length whose path count stays within max_paths.
double markov_integral(const PiecewiseMonotonicMap& map, const StationaryMarkovMeasure& m, const Observable& phi,
                       std::size_t max_paths = 200000);

/// One report per component: spectral entropy of the restricted map at
/// `depth` and the periodic spread of phi at max_period.
std::vector<ComponentReport> decompose(const PiecewiseMonotonicMap& map, const std::vector<Interval>& components,
                                       const Observable& phi, std::size_t depth, std::size_t max_period);

/// CSV word,period,point,boundary,integral (integral column only with phi).
std::string periodic_csv(const PiecewiseMonotonicMap& map, const std::vector<PeriodicOrbit>& orbits,
                         const Observable* phi);

}  // namespace pmdyn
