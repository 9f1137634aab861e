#include "pmdyn/interval_map.hpp"

#include "pmdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmdyn {

bool Interval::empty() const {
  int c = compare(lo, hi);
  return c > 0 || (c == 0 && !(lo_closed && hi_closed));
}

bool Interval::contains(const Real& x) const {
  if (empty()) return false;
  bool above = lo_closed ? lo <= x : lo < x;
  bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool Interval::empty(const NumericPolicy& p) const {
  if (p.exact) return empty();
  return lo.to_double() > hi.to_double() + p.compare_eps;
}

bool Interval::degenerate(const NumericPolicy& p) const {
  if (empty(p)) return false;
  if (p.exact) return lo == hi;
  return hi.to_double() - lo.to_double() <= p.compare_eps;
}

std::string Interval::str() const {
  std::ostringstream os;
  os << (lo_closed ? '[' : '(') << lo << ',' << hi << (hi_closed ? ']' : ')');
  return os.str();
}

Interval intersect_closed(const Interval& a, const Interval& b) {
  return Interval::closed(max(a.lo, b.lo), min(a.hi, b.hi));
}

// ---------------------------------------------------------------------------

Branch::Branch(Interval domain, Affine affine) : domain_(std::move(domain)), kind_(std::move(affine)) {
  const auto& a = std::get<Affine>(kind_);
  if (a.slope.is_zero()) throw Error(ErrorCode::InvalidArgument, "affine branch needs nonzero slope");
  increasing_ = a.slope.sign() > 0;
}

Branch::Branch(Interval domain, Tabulated table) : domain_(std::move(domain)), kind_(std::move(table)) {
  const auto& t = std::get<Tabulated>(kind_);
  if (t.xs.size() < 2 || t.xs.size() != t.ys.size())
    throw Error(ErrorCode::InvalidArgument, "tabulated branch needs at least two matching samples");
  if (t.xs.front() != domain_.lo || t.xs.back() != domain_.hi)
    throw Error(ErrorCode::InvalidArgument, "tabulated samples must span the branch domain");
  increasing_ = t.ys[1] > t.ys[0];
  for (std::size_t i = 1; i < t.xs.size(); ++i) {
    if (!(t.xs[i] > t.xs[i - 1])) throw Error(ErrorCode::InvalidArgument, "sample abscissae must increase");
    bool up = t.ys[i] > t.ys[i - 1];
    bool down = t.ys[i] < t.ys[i - 1];
    if ((increasing_ && !up) || (!increasing_ && !down))
      throw Error(ErrorCode::InvalidArgument, "tabulated branch must be strictly monotone");
  }
}

Real Branch::value(const Real& x) const {
  if (const auto* a = std::get_if<Affine>(&kind_)) return a->slope * x + a->intercept;
  const auto& t = std::get<Tabulated>(kind_);
  auto it = std::upper_bound(t.xs.begin(), t.xs.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(t.xs.begin(), it));
  i = std::clamp<std::size_t>(i, 1, t.xs.size() - 1);
  const Real& x0 = t.xs[i - 1];
  const Real& x1 = t.xs[i];
  return t.ys[i - 1] + (t.ys[i] - t.ys[i - 1]) * (x - x0) / (x1 - x0);
}

Interval Branch::image_of(const Interval& j) const {
  Real a = value(j.lo), b = value(j.hi);
  return increasing_ ? Interval::closed(std::move(a), std::move(b)) : Interval::closed(std::move(b), std::move(a));
}

Interval Branch::image() const { return image_of(domain_.closure()); }

Real Branch::inverse(const Real& y) const {
  if (const auto* a = std::get_if<Affine>(&kind_)) return (y - a->intercept) / a->slope;
  const auto& t = std::get<Tabulated>(kind_);
  std::size_t n = t.ys.size();
  for (std::size_t i = 1; i < n; ++i) {
    const Real& y0 = t.ys[i - 1];
    const Real& y1 = t.ys[i];
    bool inside = increasing_ ? (y0 <= y && y <= y1) : (y1 <= y && y <= y0);
    if (inside || i == n - 1) return t.xs[i - 1] + (t.xs[i] - t.xs[i - 1]) * (y - y0) / (y1 - y0);
  }
  return t.xs.front();
}

double Branch::min_abs_slope() const {
  if (const auto* a = std::get_if<Affine>(&kind_)) return std::fabs(a->slope.to_double());
  const auto& t = std::get<Tabulated>(kind_);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < t.xs.size(); ++i) {
    double s = (t.ys[i] - t.ys[i - 1]).to_double() / (t.xs[i] - t.xs[i - 1]).to_double();
    best = std::min(best, std::fabs(s));
  }
  return best;
}

namespace {

bool branch_exact(const Branch& b) {
  if (!b.domain().lo.is_exact() || !b.domain().hi.is_exact()) return false;
  if (b.is_affine()) return b.affine().slope.is_exact() && b.affine().intercept.is_exact();
  for (const auto& v : b.table().xs)
    if (!v.is_exact()) return false;
  for (const auto& v : b.table().ys)
    if (!v.is_exact()) return false;
  return true;
}

Branch branch_to_float(const Branch& b) {
  Interval dom{b.domain().lo.as_float(), b.domain().hi.as_float(), b.domain().lo_closed, b.domain().hi_closed};
  if (b.is_affine()) return Branch(dom, Branch::Affine{b.affine().slope.as_float(), b.affine().intercept.as_float()});
  Branch::Tabulated t;
  for (const auto& v : b.table().xs) t.xs.push_back(v.as_float());
  for (const auto& v : b.table().ys) t.ys.push_back(v.as_float());
  return Branch(dom, std::move(t));
}

}  // namespace

PiecewiseMonotonicMap::PiecewiseMonotonicMap(std::vector<Real> endpoints, std::vector<Branch> branches,
                                             std::vector<Real> boundary_images, std::string description)
    : endpoints_(std::move(endpoints)),
      branches_(std::move(branches)),
      boundary_images_(std::move(boundary_images)),
      description_(std::move(description)) {
  if (endpoints_.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two endpoints");
  if (branches_.size() + 1 != endpoints_.size())
    throw Error(ErrorCode::InvalidArgument, "need exactly one branch per partition interval");
  if (!boundary_images_.empty() && boundary_images_.size() != endpoints_.size())
    throw Error(ErrorCode::InvalidArgument, "boundary_images must list one value per endpoint");

  bool all_exact = std::all_of(endpoints_.begin(), endpoints_.end(), [](const Real& r) { return r.is_exact(); }) &&
                   std::all_of(branches_.begin(), branches_.end(), branch_exact) &&
                   std::all_of(boundary_images_.begin(), boundary_images_.end(),
                               [](const Real& r) { return r.is_exact(); });
  policy_ = all_exact ? NumericPolicy::exact_mode() : NumericPolicy::float_mode();
  if (!all_exact) {
    for (auto& e : endpoints_) e = e.as_float();
    for (auto& b : branches_) b = branch_to_float(b);
    for (auto& v : boundary_images_) v = v.as_float();
  }

  if (endpoints_.front() != Real(0) || endpoints_.back() != Real(1))
    throw Error(ErrorCode::InvalidArgument, "pieces must cover [0,1]: endpoints must start at 0 and end at 1");
  for (std::size_t i = 1; i < endpoints_.size(); ++i)
    if (!(endpoints_[i - 1] < endpoints_[i]))
      throw Error(ErrorCode::InvalidArgument, "overlapping pieces: endpoints must be strictly increasing");

  const Real zero(0), one(1);
  for (std::size_t j = 0; j < branches_.size(); ++j) {
    const auto& dom = branches_[j].domain();
    if (!policy_.eq(dom.lo, endpoints_[j]) || !policy_.eq(dom.hi, endpoints_[j + 1]))
      throw Error(ErrorCode::InvalidArgument, "branch " + std::to_string(j + 1) + " domain does not match the partition");
    auto img = branches_[j].image();
    if (policy_.lt(img.lo, zero) || policy_.lt(one, img.hi))
      throw Error(ErrorCode::InvalidArgument,
                  "branch " + std::to_string(j + 1) + " image " + img.str() + " escapes [0,1]");
  }

  if (boundary_images_.empty()) {
    boundary_images_.push_back(branches_.front().value(endpoints_.front()));
    for (std::size_t j = 1; j < endpoints_.size(); ++j) boundary_images_.push_back(branches_[j - 1].value(endpoints_[j]));
  }
  for (auto& v : boundary_images_) {
    if (policy_.lt(v, zero) || policy_.lt(one, v))
      throw Error(ErrorCode::InvalidArgument, "boundary image " + v.str() + " outside [0,1]");
    if (!policy_.exact) v = Real(std::clamp(v.to_double(), 0.0, 1.0));
  }
}

Interval PiecewiseMonotonicMap::partition_closure(Symbol j) const {
  if (j < 1 || j > k()) throw Error(ErrorCode::InvalidArgument, "symbol " + std::to_string(j) + " out of range");
  return Interval::closed(endpoints_[static_cast<std::size_t>(j - 1)], endpoints_[static_cast<std::size_t>(j)]);
}

std::optional<std::size_t> PiecewiseMonotonicMap::endpoint_index(const Real& x) const {
  auto it = std::lower_bound(endpoints_.begin(), endpoints_.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(endpoints_.begin(), it));
  if (i < endpoints_.size() && policy_.eq(endpoints_[i], x)) return i;
  if (i > 0 && policy_.eq(endpoints_[i - 1], x)) return i - 1;
  return std::nullopt;
}

std::optional<Symbol> PiecewiseMonotonicMap::symbol_of(const Real& x) const {
  if (endpoint_index(x)) return std::nullopt;
  if (x < endpoints_.front() || x > endpoints_.back()) return std::nullopt;
  auto it = std::upper_bound(endpoints_.begin(), endpoints_.end(), x);
  return static_cast<Symbol>(std::distance(endpoints_.begin(), it));
}

double PiecewiseMonotonicMap::inverse_contraction() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& b : branches_) s = std::min(s, b.min_abs_slope());
  return 1.0 / s;
}

PiecewiseMonotonicMap PiecewiseMonotonicMap::to_float() const {
  std::vector<Real> ends;
  for (const auto& e : endpoints_) ends.push_back(e.as_float());
  std::vector<Branch> bs;
  for (const auto& b : branches_) bs.push_back(branch_to_float(b));
  std::vector<Real> imgs;
  for (const auto& v : boundary_images_) imgs.push_back(v.as_float());
  return PiecewiseMonotonicMap(std::move(ends), std::move(bs), std::move(imgs), description_);
}

// ---------------------------------------------------------------------------

namespace {

PiecewiseMonotonicMap linear_mod_one(const Real& beta, const Real& alpha, const std::string& description) {
  if (!(beta > Real(1))) throw Error(ErrorCode::InvalidArgument, "beta must exceed 1, got " + beta.str());
  if (alpha < Real(0) || !(alpha < Real(1)))
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0,1), got " + alpha.str());
  // Cut points solve beta*x + alpha = j for integer j.
  std::vector<Real> ends{Real(0)};
  for (long j = 1;; ++j) {
    Real cut = (Real(j) - alpha) / beta;
    if (!(cut < Real(1))) break;
    ends.push_back(cut);
  }
  ends.push_back(Real(1));
  std::vector<Branch> branches;
  for (std::size_t m = 1; m < ends.size(); ++m) {
    Real intercept = alpha - Real(static_cast<long>(m - 1));
    branches.emplace_back(Interval::open(ends[m - 1], ends[m]), Branch::Affine{beta, intercept});
  }
  return PiecewiseMonotonicMap(std::move(ends), std::move(branches), {}, description);
}

}  // namespace

PiecewiseMonotonicMap make_map(const MapSpec& spec) {
  return std::visit(
      [](const auto& s) -> PiecewiseMonotonicMap {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BetaSpec>) {
          return linear_mod_one(s.beta, Real(0), "beta beta=" + s.beta.str());
        } else if constexpr (std::is_same_v<S, LinearModOneSpec>) {
          return linear_mod_one(s.beta, s.alpha, "linear_mod_one beta=" + s.beta.str() + " alpha=" + s.alpha.str());
        } else if constexpr (std::is_same_v<S, TentSpec>) {
          if (!(s.slope > Real(1)) || s.slope > Real(2))
            throw Error(ErrorCode::InvalidArgument, "tent slope must lie in (1,2], got " + s.slope.str());
          Real half = Real::ratio(1, 2);
          std::vector<Branch> branches;
          branches.emplace_back(Interval::open(Real(0), half), Branch::Affine{s.slope, Real(0)});
          branches.emplace_back(Interval::open(half, Real(1)), Branch::Affine{-s.slope, s.slope});
          return PiecewiseMonotonicMap({Real(0), half, Real(1)}, std::move(branches), {},
                                       "tent slope=" + s.slope.str());
        } else {
          std::size_t k = s.slopes.size();
          if (k == 0 || s.endpoints.size() != k + 1 || s.intercepts.size() != k)
            throw Error(ErrorCode::InvalidArgument,
                        "affine_pieces needs k slopes, k intercepts and k+1 endpoints");
          std::vector<Branch> branches;
          for (std::size_t j = 0; j < k; ++j)
            branches.emplace_back(Interval::open(s.endpoints[j], s.endpoints[j + 1]),
                                  Branch::Affine{s.slopes[j], s.intercepts[j]});
          return PiecewiseMonotonicMap(s.endpoints, std::move(branches), s.boundary_images,
                                       "affine_pieces k=" + std::to_string(k));
        }
      },
      spec);
}

Interval snap_to_partition(const PiecewiseMonotonicMap& map, Interval j) {
  const auto& p = map.policy();
  if (p.exact) return j;
  for (Real* end : {&j.lo, &j.hi})
    for (const auto& e : map.endpoints())
      if (p.same_vertex_coord(*end, e)) {
        *end = e;
        break;
      }
  return j;
}

Real evaluate(const PiecewiseMonotonicMap& map, const Real& x) {
  const auto& p = map.policy();
  if (p.lt(x, Real(0)) || p.lt(Real(1), x))
    throw Error(ErrorCode::Domain, "x=" + x.str() + " outside [0,1]");
  if (auto i = map.endpoint_index(x)) return map.boundary_images()[*i];
  auto j = map.symbol_of(x);
  Real y = map.branch(*j).value(p.coerce(x));
  if (!p.exact) y = Real(std::clamp(y.to_double(), 0.0, 1.0));
  return y;
}

OrbitRecord iterate_orbit(const PiecewiseMonotonicMap& map, const Real& x, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "orbit length must be positive");
  OrbitRecord rec;
  rec.points.reserve(n);
  Real cur = x;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) cur = evaluate(map, cur);
    else if (map.policy().lt(cur, Real(0)) || map.policy().lt(Real(1), cur))
      throw Error(ErrorCode::Domain, "x=" + cur.str() + " outside [0,1]");
    if (!rec.hit_boundary_at && map.endpoint_index(cur)) rec.hit_boundary_at = j;
    rec.points.push_back(cur);
  }
  return rec;
}

std::vector<Symbol> itinerary(const PiecewiseMonotonicMap& map, const Real& x, std::size_t n) {
  std::vector<Symbol> word;
  word.reserve(n);
  Real cur = x;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) cur = evaluate(map, cur);
    auto s = map.symbol_of(cur);
    if (!s) {
      if (map.policy().lt(cur, Real(0)) || map.policy().lt(Real(1), cur))
        throw Error(ErrorCode::Domain, "x=" + cur.str() + " outside [0,1]");
      throw Error(ErrorCode::BoundaryHit, "T^" + std::to_string(j) + "(x) is a partition endpoint", j);
    }
    word.push_back(*s);
  }
  return word;
}

std::optional<Real> inverse_branch(const PiecewiseMonotonicMap& map, Symbol j, const Real& y) {
  const auto& b = map.branch(j);
  const auto& p = map.policy();
  auto img = b.image();
  if (p.lt(y, img.lo) || p.lt(img.hi, y)) return std::nullopt;
  Real yy = p.exact ? y : Real(std::clamp(y.to_double(), img.lo.to_double(), img.hi.to_double()));
  Real x = b.inverse(yy);
  if (!p.exact) x = Real(std::clamp(x.to_double(), b.domain().lo.to_double(), b.domain().hi.to_double()));
  return x;
}

// ---------------------------------------------------------------------------

RestrictedMap restrict_map(const PiecewiseMonotonicMap& map, const Interval& component) {
  const auto& p = map.policy();
  const Real& a = component.lo;
  const Real& b = component.hi;
  if (a < Real(0) || b > Real(1) || !(a < b))
    throw Error(ErrorCode::InvalidArgument, "component " + component.str() + " is not a subinterval of [0,1]");
  Real len = b - a;
  auto chart = [&](const Real& x) { return (x - a) / len; };

  std::vector<Real> cuts{a};
  for (const auto& e : map.endpoints())
    if (a < e && e < b) cuts.push_back(e);
  cuts.push_back(b);

  std::vector<Real> ends;
  std::vector<Branch> branches;
  std::vector<Symbol> origin;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Real mid = (cuts[i] + cuts[i + 1]) / Real(2);
    Symbol s = *map.symbol_of(mid);
    const Branch& br = map.branch(s);
    auto img = br.image_of(Interval::closed(cuts[i], cuts[i + 1]));
    if (p.lt(img.lo, a) || p.lt(b, img.hi))
      throw Error(ErrorCode::InvalidArgument, "component " + component.str() + " is not invariant: piece " +
                                                  Interval::closed(cuts[i], cuts[i + 1]).str() + " maps to " + img.str());
    Interval dom = Interval::open(chart(cuts[i]), chart(cuts[i + 1]));
    if (br.is_affine()) {
      const auto& af = br.affine();
      branches.emplace_back(dom, Branch::Affine{af.slope, (af.slope * a + af.intercept - a) / len});
    } else {
      Branch::Tabulated t;
      t.xs.push_back(dom.lo);
      t.ys.push_back(chart(br.value(cuts[i])));
      for (std::size_t m = 0; m < br.table().xs.size(); ++m) {
        const Real& x = br.table().xs[m];
        if (cuts[i] < x && x < cuts[i + 1]) {
          t.xs.push_back(chart(x));
          t.ys.push_back(chart(br.table().ys[m]));
        }
      }
      t.xs.push_back(dom.hi);
      t.ys.push_back(chart(br.value(cuts[i + 1])));
      branches.emplace_back(dom, std::move(t));
    }
    origin.push_back(s);
    ends.push_back(dom.lo);
  }
  ends.push_back(Real(1));
  ends.front() = Real(0);

  std::vector<Real> images;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    std::optional<Real> v;
    if (auto idx = map.endpoint_index(cuts[i])) {
      const Real& img = map.boundary_images()[*idx];
      if (p.le(a, img) && p.le(img, b)) v = chart(img);
    }
    if (!v) v = i == 0 ? branches.front().value(Real(0)) : branches[i - 1].value(ends[i]);
    if (!p.exact) v = Real(std::clamp(v->to_double(), 0.0, 1.0));
    images.push_back(*v);
  }
  PiecewiseMonotonicMap restricted(std::move(ends), std::move(branches), std::move(images),
                                   map.description() + " restricted to " + component.str());
  return {std::move(restricted), Interval::closed(a, b), std::move(origin)};
}

}  // namespace pmdyn
