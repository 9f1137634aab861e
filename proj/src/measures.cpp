#include "pmdyn/measures.hpp"

#include "pmdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pmdyn {

// ---------------------------------------------------------------------------
// Observable

Observable Observable::identity() { return Observable{}; }

Observable Observable::constant(Real c) {
  Observable o;
  o.kind_ = Kind::Constant;
  o.lipschitz_ = 0.0;
  o.lo_ = o.hi_ = c.to_double();
  o.description_ = "const:" + c.str();
  o.constant_ = std::move(c);
  return o;
}

Observable Observable::piecewise_linear(std::vector<Real> xs, std::vector<Real> ys) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw Error(ErrorCode::InvalidArgument, "piecewise linear observable needs at least two nodes");
  if (xs.front() != Real(0) || xs.back() != Real(1))
    throw Error(ErrorCode::InvalidArgument, "piecewise linear nodes must run from 0 to 1");
  Observable o;
  o.kind_ = Kind::PiecewiseLinear;
  o.lipschitz_ = 0.0;
  o.lo_ = o.hi_ = ys.front().to_double();
  std::ostringstream d;
  d << "pl:";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) {
      if (!(xs[i] > xs[i - 1])) throw Error(ErrorCode::InvalidArgument, "piecewise linear nodes must increase");
      o.lipschitz_ = std::max(o.lipschitz_, std::fabs(((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])).to_double()));
      d << ',';
    }
    o.lo_ = std::min(o.lo_, ys[i].to_double());
    o.hi_ = std::max(o.hi_, ys[i].to_double());
    d << xs[i] << ':' << ys[i];
  }
  o.description_ = d.str();
  o.xs_ = std::move(xs);
  o.ys_ = std::move(ys);
  return o;
}

Observable Observable::indicator(Word w) {
  if (w.empty()) throw Error(ErrorCode::InvalidArgument, "indicator of the empty word");
  std::string name = "indicator:" + format_word(w, *std::max_element(w.begin(), w.end()) > 9 ? 10 : 9);
  std::size_t depth = w.size();
  std::map<Word, Real> table{{std::move(w), Real(1)}};
  Observable o = symbolic(depth, std::move(table), Real(0));
  o.lo_ = 0.0;
  o.hi_ = 1.0;
  o.description_ = std::move(name);
  return o;
}

Observable Observable::symbolic(std::size_t depth, std::map<Word, Real> table, Real otherwise) {
  if (depth == 0) throw Error(ErrorCode::InvalidArgument, "symbolic observable needs depth >= 1");
  Observable o;
  o.kind_ = Kind::Symbolic;
  o.depth_ = depth;
  o.lipschitz_ = 0.0;
  o.lo_ = o.hi_ = otherwise.to_double();
  for (const auto& [w, v] : table) {
    if (w.size() != depth) throw Error(ErrorCode::InvalidArgument, "symbolic table word of wrong length");
    o.lo_ = std::min(o.lo_, v.to_double());
    o.hi_ = std::max(o.hi_, v.to_double());
  }
  o.table_ = std::move(table);
  o.otherwise_ = std::move(otherwise);
  o.description_ = "symbolic depth " + std::to_string(depth);
  return o;
}

Observable Observable::callable(std::function<double(double)> f, double lipschitz, double lo, double hi,
                                std::string name) {
  Observable o;
  o.kind_ = Kind::Callable;
  o.fn_ = std::move(f);
  o.lipschitz_ = lipschitz;
  o.lo_ = lo;
  o.hi_ = hi;
  o.description_ = std::move(name);
  return o;
}

Observable Observable::parse(std::string_view text, int k) {
  std::string t(text);
  auto strip = [](std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  t = strip(t);
  if (t == "x") return identity();
  if (t.rfind("const:", 0) == 0) return constant(Real::parse(strip(t.substr(6))));
  if (t.rfind("indicator:", 0) == 0) return indicator(parse_word(strip(t.substr(10)), k));
  if (t.rfind("pl:", 0) == 0) {
    std::vector<Real> xs, ys;
    std::stringstream ss(t.substr(3));
    std::string node;
    while (std::getline(ss, node, ',')) {
      auto colon = node.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::Parse, "piecewise linear node '" + node + "' needs x:y");
      xs.push_back(Real::parse(strip(node.substr(0, colon))));
      ys.push_back(Real::parse(strip(node.substr(colon + 1))));
    }
    return piecewise_linear(std::move(xs), std::move(ys));
  }
  throw Error(ErrorCode::Parse, "unknown observable '" + t + "'");
}

Real Observable::value(const Real& x) const {
  switch (kind_) {
    case Kind::Identity: return x;
    case Kind::Constant: return constant_;
    case Kind::Callable: return Real(fn_(x.to_double()));
    case Kind::PiecewiseLinear: {
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - xs_.begin()), 1, xs_.size() - 1);
      return ys_[i - 1] + (ys_[i] - ys_[i - 1]) * (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    }
    case Kind::Symbolic: break;
  }
  throw Error(ErrorCode::InvalidArgument, "symbolic observable evaluated at a point");
}

Real Observable::value(const Word& w) const {
  if (kind_ != Kind::Symbolic) throw Error(ErrorCode::InvalidArgument, "real observable evaluated on a word");
  if (w.size() < depth_) throw Error(ErrorCode::InvalidArgument, "word shorter than observable depth");
  auto it = table_.find(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(depth_)));
  return it == table_.end() ? otherwise_ : it->second;
}

Observable Observable::transported(const RestrictedMap& r) const {
  const Real& a = r.component.lo;
  const Real len = r.component.hi - r.component.lo;
  switch (kind_) {
    case Kind::Identity:
    case Kind::Constant:
      return piecewise_linear({Real(0), Real(1)}, {value(a), value(r.component.hi)});
    case Kind::PiecewiseLinear: {
      std::vector<Real> xs{Real(0)}, ys{value(a)};
      for (std::size_t i = 0; i < xs_.size(); ++i)
        if (a < xs_[i] && xs_[i] < r.component.hi) {
          xs.push_back((xs_[i] - a) / len);
          ys.push_back(ys_[i]);
        }
      xs.push_back(Real(1));
      ys.push_back(value(r.component.hi));
      return piecewise_linear(std::move(xs), std::move(ys));
    }
    case Kind::Callable: {
      double lo = a.to_double(), l = len.to_double();
      auto f = fn_;
      return callable([f, lo, l](double y) { return f(lo + l * y); }, lipschitz_ * l, lo_, hi_, description_);
    }
    case Kind::Symbolic: {
      const std::size_t k = r.origin_symbol.size();
      std::map<Word, Real> table;
      Word w(depth_, 1);
      while (true) {
        Word orig;
        for (Symbol s : w) orig.push_back(r.origin_symbol[static_cast<std::size_t>(s - 1)]);
        Real v = value(orig);
        if (v != otherwise_) table.emplace(w, v);
        std::size_t i = depth_;
        while (i > 0 && static_cast<std::size_t>(w[i - 1]) == k) w[--i] = 1;
        if (i == 0) break;
        ++w[i - 1];
      }
      Observable o = symbolic(depth_, std::move(table), otherwise_);
      o.description_ = description_;
      return o;
    }
  }
  return *this;
}

// ---------------------------------------------------------------------------
// Periodic orbits

namespace {

bool is_primitive(const Word& w) {
  const std::size_t p = w.size();
  for (std::size_t d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < p && repeats; ++i) repeats = w[i] == w[i - d];
    if (repeats) return false;
  }
  return true;
}

Word rotate(const Word& w, std::size_t j) {
  Word r(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r[i] = w[(i + j) % w.size()];
  return r;
}

bool least_rotation(const Word& w) {
  for (std::size_t j = 1; j < w.size(); ++j)
    if (rotate(w, j) < w) return false;
  return true;
}

// Image of the cylinder under T^p along w.
Interval forward_image(const PiecewiseMonotonicMap& map, const Word& w, Interval j) {
  for (Symbol s : w) j = map.branch(s).image_of(j);
  return j;
}

Real apply_inverse(const PiecewiseMonotonicMap& map, Symbol s, const Real& y) {
  const auto& b = map.branch(s);
  if (map.exact()) return b.inverse(y);
  auto img = b.image();
  double yy = std::clamp(y.to_double(), img.lo.to_double(), img.hi.to_double());
  return b.inverse(Real(yy));
}

Real compose_inverse(const PiecewiseMonotonicMap& map, const Word& w, const Real& x) {
  Real y = x;
  for (std::size_t i = w.size(); i-- > 0;) y = apply_inverse(map, w[i], y);
  return y;
}

}  // namespace

std::vector<Word> find_periodic_words(const PiecewiseMonotonicMap& map, std::size_t max_period,
                                      std::uint64_t budget) {
  std::vector<Word> out;
  const auto& p = map.policy();
  for (std::size_t n = 1; n <= max_period; ++n) {
    for (auto& w : enumerate_words(map, n, budget)) {
      if (!is_primitive(w) || !least_rotation(w)) continue;
      Interval cyl = cylinder_interval(map, w);
      Interval img = forward_image(map, w, cyl);
      if (p.le(img.lo, cyl.lo) && p.le(cyl.hi, img.hi)) out.push_back(std::move(w));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PeriodicOrbit realize_periodic_point(const PiecewiseMonotonicMap& map, const Word& w) {
  if (w.empty()) throw Error(ErrorCode::InvalidArgument, "periodic word must be nonempty");
  for (Symbol s : w)
    if (s < 1 || s > map.k()) throw Error(ErrorCode::InvalidArgument, "symbol out of range in periodic word");
  const auto& p = map.policy();
  Interval cyl = cylinder_interval(map, w);
  if (!cyl.positive_length(p))
    throw Error(ErrorCode::NoFixedPoint, "cylinder of " + format_word(w, map.k()) + " has no interior");
  Interval img = forward_image(map, w, cyl);
  if (!(p.le(img.lo, cyl.lo) && p.le(cyl.hi, img.hi)))
    throw Error(ErrorCode::NoFixedPoint,
                "inverse composition along " + format_word(w, map.k()) + " is not a self-map of " + cyl.str());

  bool affine = std::all_of(w.begin(), w.end(), [&](Symbol s) { return map.branch(s).is_affine(); });
  std::optional<Real> x;
  if (affine) {
    // G(x) = A x + B, composed from the innermost inverse branch outwards.
    Real a(1), b(0);
    for (std::size_t i = w.size(); i-- > 0;) {
      const auto& br = map.branch(w[i]).affine();
      a = a / br.slope;
      b = (b - br.intercept) / br.slope;
    }
    if (!p.eq(a, Real(1))) x = b / (Real(1) - a);
  }
  if (!x) {
    double lo = cyl.lo.to_double(), hi = cyl.hi.to_double();
    auto h = [&](double t) { return compose_inverse(map, w, Real(t)).to_double() - t; };
    double hlo = h(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      double mid = 0.5 * (lo + hi);
      double hm = h(mid);
      if ((hm >= 0) == (hlo >= 0)) {
        lo = mid;
        hlo = hm;
      } else {
        hi = mid;
      }
    }
    x = Real(0.5 * (lo + hi));
  }
  if (p.lt(*x, cyl.lo) || p.lt(cyl.hi, *x))
    throw Error(ErrorCode::NoFixedPoint, "fixed point of " + format_word(w, map.k()) + " escapes its cylinder");

  PeriodicOrbit orbit{w, *x, std::vector<Real>(w.size()), false};
  const std::size_t n = w.size();
  orbit.orbit[0] = *x;
  Real next = *x;  // x_j = g_{w_j}(x_{j+1}), with x_n = x_0
  for (std::size_t j = n; j-- > 1;) {
    next = apply_inverse(map, w[j], next);
    orbit.orbit[j] = next;
  }
  for (const auto& y : orbit.orbit)
    if (map.endpoint_index(y)) orbit.boundary = true;
  if (!orbit.boundary) {
    for (std::size_t j = 0; j < n; ++j) {
      auto s = map.symbol_of(orbit.orbit[j]);
      if (!s || *s != w[j] || !p.eq(evaluate(map, orbit.orbit[j]), orbit.orbit[(j + 1) % n]))
        throw Error(ErrorCode::NoFixedPoint, "realised orbit of " + format_word(w, map.k()) + " fails verification");
    }
  }
  return orbit;
}

std::vector<PeriodicOrbit> periodic_catalog(const PiecewiseMonotonicMap& map, std::size_t max_period,
                                            std::uint64_t budget) {
  std::vector<PeriodicOrbit> out;
  for (const auto& w : find_periodic_words(map, max_period, budget)) out.push_back(realize_periodic_point(map, w));
  return out;
}

Real integral(const PeriodicOrbit& mu, const Observable& phi) {
  const std::size_t p = mu.word.size();
  Real sum(0);
  if (phi.is_symbolic()) {
    for (std::size_t j = 0; j < p; ++j) {
      Word window;
      for (std::size_t i = 0; i < std::max(phi.depth(), p); ++i) window.push_back(mu.word[(j + i) % p]);
      sum += phi.value(window);
    }
  } else {
    for (const auto& y : mu.orbit) sum += phi.value(y);
  }
  return sum / Real(static_cast<long>(p));
}

Real birkhoff_average(const PiecewiseMonotonicMap& map, const Real& x, const Observable& phi, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Birkhoff average needs n >= 1");
  Real sum(0);
  if (phi.is_symbolic()) {
    Word it = itinerary(map, x, n + phi.depth() - 1);
    for (std::size_t j = 0; j < n; ++j)
      sum += phi.value(Word(it.begin() + static_cast<std::ptrdiff_t>(j), it.end()));
  } else {
    for (const auto& y : iterate_orbit(map, x, n).points) sum += phi.value(y);
  }
  return sum / Real(static_cast<long>(n));
}

Spread average_spread(const PiecewiseMonotonicMap& map, const Observable& phi, std::size_t max_period,
                      bool include_boundary) {
  Spread s;
  for (const auto& orbit : periodic_catalog(map, max_period)) {
    if (orbit.boundary && !include_boundary) continue;
    Real v = integral(orbit, phi);
    if (s.orbits == 0 || v < s.min) {
      s.min = v;
      s.argmin = orbit.word;
    }
    if (s.orbits == 0 || v > s.max) {
      s.max = v;
      s.argmax = orbit.word;
    }
    ++s.orbits;
  }
  if (s.orbits == 0)
    throw Error(ErrorCode::NoPeriodicOrbits, "no periodic orbits up to period " + std::to_string(max_period));
  return s;
}

// ---------------------------------------------------------------------------
// Parry measure

double StationaryMarkovMeasure::entropy() const {
  double h = 0.0;
  for (std::size_t d = 0; d < transition.size(); ++d)
    for (double pdc : transition[d])
      if (pdc > 0.0) h -= stationary[d] * pdc * std::log(pdc);
  return h;
}

StationaryMarkovMeasure parry_measure(const SubDiagram& s) {
  if (!s.strongly_connected())
    throw Error(ErrorCode::NotStronglyConnected, "Parry measure needs a strongly connected subdiagram");
  const auto& adj = s.local_arrows();
  const std::size_t n = s.size();
  auto pv = graph::perron_vectors(adj);
  StationaryMarkovMeasure m{s, pv.rho, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)),
                            std::vector<double>(n, 0.0)};
  for (std::size_t d = 0; d < n; ++d) {
    double row = 0.0;
    for (std::size_t c : adj[d]) {
      m.transition[d][c] = pv.right[c] / (pv.rho * pv.right[d]);
      row += m.transition[d][c];
    }
    for (std::size_t c : adj[d]) m.transition[d][c] /= row;
  }
  double total = 0.0;
  for (std::size_t d = 0; d < n; ++d) total += m.stationary[d] = pv.left[d] * pv.right[d];
  for (auto& v : m.stationary) v /= total;
  return m;
}

double markov_integral(const PiecewiseMonotonicMap& map, const StationaryMarkovMeasure& m, const Observable& phi,
                       std::size_t max_paths) {
  const auto& s = m.subdiagram;
  const auto& adj = s.local_arrows();
  std::size_t len = phi.depth();
  std::optional<PiecewiseMonotonicMap> fmap;
  if (!phi.is_symbolic()) {
    std::size_t deg = 1;
    for (const auto& row : adj) deg = std::max(deg, row.size());
    len = 1;
    double paths = static_cast<double>(s.size());
    while (len < 40 && paths * static_cast<double>(deg) <= static_cast<double>(max_paths)) {
      paths *= static_cast<double>(deg);
      ++len;
    }
    fmap = map.exact() ? map.to_float() : map;
  }
  double total = 0.0;
  struct Frame {
    std::size_t v;
    double prob;
    Word w;
  };
  std::vector<Frame> stack;
  for (std::size_t d = 0; d < s.size(); ++d) stack.push_back({d, m.stationary[d], Word{s.symbol(d)}});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.w.size() == len) {
      if (phi.is_symbolic()) {
        total += f.prob * phi.value(f.w).to_double();
      } else {
        Interval cyl = cylinder_interval(*fmap, f.w);
        if (!cyl.empty(fmap->policy())) total += f.prob * phi.value(cyl.midpoint()).to_double();
      }
      continue;
    }
    for (std::size_t c : adj[f.v]) {
      Word w = f.w;
      w.push_back(s.symbol(c));
      stack.push_back({c, f.prob * m.transition[f.v][c], std::move(w)});
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

std::vector<ComponentReport> decompose(const PiecewiseMonotonicMap& map, const std::vector<Interval>& components,
                                       const Observable& phi, std::size_t depth, std::size_t max_period) {
  for (std::size_t i = 1; i < components.size(); ++i)
    if (map.policy().lt(components[i].lo, components[i - 1].hi))
      throw Error(ErrorCode::InvalidArgument, "components must be disjoint and ordered");
  std::vector<ComponentReport> out;
  for (const auto& comp : components) {
    auto r = restrict_map(map, comp);
    ComponentReport rep;
    rep.interval = r.component;
    rep.entropy = entropy_spectral_sequence(r.map, {depth}).front();
    try {
      auto s = average_spread(r.map, phi.transported(r), max_period);
      rep.spread_min = s.min.to_double();
      rep.spread_max = s.max.to_double();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPeriodicOrbits) throw;
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::string periodic_csv(const PiecewiseMonotonicMap& map, const std::vector<PeriodicOrbit>& orbits,
                         const Observable* phi) {
  std::ostringstream os;
  os << "word,period,point,boundary";
  if (phi) os << ",integral";
  os << '\n';
  for (const auto& o : orbits) {
    os << format_word(o.word, map.k()) << ',' << o.word.size() << ',' << o.point << ','
       << (o.boundary ? "true" : "false");
    if (phi) os << ',' << integral(o, *phi);
    os << '\n';
  }
  return os.str();
}

}  // namespace pmdyn
