#include "property_suite.hpp"

#include "oracles.hpp"

#include "pmdyn/diagram.hpp"
#include "pmdyn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace props {
namespace {

using namespace pmdyn;

struct Generated {
  AffinePiecesSpec spec;
  oracle::AffinePieces exact;
};

// Expanding affine map: cut points on a grid of twelfths, images with
// endpoints on a grid of eighths and longer than their domain.
Generated random_map(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kdist(2, 4);
  int k = kdist(rng);
  std::vector<int> cuts;
  for (int i = 1; i < 12; ++i) cuts.push_back(i);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(k - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(12);

  Generated g;
  for (int c : cuts) {
    g.exact.ends.emplace_back(c, 12);
    g.exact.ends.back().canonicalize();
    g.spec.endpoints.emplace_back(Real::ratio(c, 12));
  }
  for (int j = 0; j < k; ++j) {
    mpq_class len = g.exact.ends[j + 1] - g.exact.ends[j];
    std::vector<int> lengths;
    for (int l = 1; l <= 8; ++l)
      if (mpq_class(l, 8) > len) lengths.push_back(l);
    int l = lengths[std::uniform_int_distribution<std::size_t>(0, lengths.size() - 1)(rng)];
    int c = std::uniform_int_distribution<int>(0, 8 - l)(rng);
    bool up = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    mpq_class lo(c, 8), hi(c + l, 8), a = g.exact.ends[j];
    lo.canonicalize();
    hi.canonicalize();
    mpq_class slope = (hi - lo) / len;
    if (!up) slope = -slope;
    mpq_class intercept = (up ? lo : hi) - slope * a;
    g.exact.slopes.push_back(slope);
    g.exact.intercepts.push_back(intercept);
    g.spec.slopes.emplace_back(slope);
    g.spec.intercepts.emplace_back(intercept);
  }
  return g;
}

bool subset(const Interval& inner, const Interval& outer) {
  if (inner.empty()) return true;
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

struct Checker {
  Result r;
  void check(bool cond, const std::string& what) {
    ++r.checks;
    if (!cond && r.ok) {
      r.ok = false;
      r.detail = what;
    }
  }
};

std::string label(std::size_t m, const std::string& what) {
  return "map " + std::to_string(m) + ": " + what;
}

}  // namespace

std::vector<Result> run(std::uint64_t seed, std::size_t maps) {
  std::mt19937_64 rng(seed);
  Checker nesting{{"cylinder nesting"}}, submult{{"count submultiplicativity"}},
      perron{{"Perron monotonicity under vertex addition"}}, parry{{"Parry entropy equals log rho"}},
      birkhoff{{"periodic Birkhoff-average exactness"}}, degree{{"diagram out-degree <= k"}},
      growth{{"monotone diagram growth"}}, paths{{"projected paths admissible"}};
  std::vector<Checker*> all{&nesting, &submult, &perron, &parry, &birkhoff, &degree, &growth, &paths};

  for (std::size_t m = 0; m < maps; ++m) {
    auto g = random_map(rng);
    auto map = make_map(g.spec);
    const int k = map.k();
    for (auto* c : all) ++c->r.maps;

    // Cylinders: children inside parents, and sampled points inside the
    // cylinder of their own itinerary (itinerary from the exact oracle).
    for (std::size_t n = 1; n <= 4; ++n) {
      for (auto& w : enumerate_words(map, n)) {
        auto parent = cylinder_interval(map, w);
        nesting.check(is_admissible(map, w), label(m, "enumerated word not admissible"));
        for (Symbol a = 1; a <= k; ++a) {
          Word wa = w;
          wa.push_back(a);
          nesting.check(subset(cylinder_interval(map, wa), parent), label(m, "child cylinder escapes " + format_word(w, k)));
        }
      }
    }
    for (int s = 1; s < 64; ++s) {
      mpq_class x(2 * s - 1, 128), y = x;
      x.canonicalize();
      y = x;
      Word w;
      for (int i = 0; i < 5; ++i) {
        int sym = g.exact.symbol(y);
        if (sym == 0) break;
        w.push_back(sym);
        y = g.exact.apply(sym, y);
      }
      if (w.size() < 5) continue;
      nesting.check(cylinder_interval(map, w).contains(Real(x)), label(m, "point outside its cylinder"));
    }

    std::vector<std::uint64_t> counts(9);
    for (std::size_t n = 1; n <= 8; ++n) counts[n] = count_words(map, n);
    for (std::size_t a = 1; a <= 4; ++a)
      for (std::size_t b = 1; b <= 4; ++b)
        submult.check(counts[a + b] <= counts[a] * counts[b],
                      label(m, "count(" + std::to_string(a + b) + ") > count(" + std::to_string(a) + ")count(" +
                                   std::to_string(b) + ")"));

    const std::size_t depth = 7;
    auto d = build_diagram(map, depth);
    double prev = 0.0;
    for (std::size_t t = 0; t <= depth; ++t) {
      double rho = spectral_radius(level_truncation(d, t)).rho;
      perron.check(rho >= prev - 1e-12, label(m, "rho drops at level " + std::to_string(t)));
      prev = rho;
    }
    auto w = whole(d);
    double rho_all = spectral_radius(w).rho;
    for (std::size_t drop = 0; drop < std::min<std::size_t>(d->size(), 24); ++drop) {
      std::vector<std::size_t> keep;
      for (std::size_t v = 0; v < d->size(); ++v)
        if (v != drop) keep.push_back(v);
      perron.check(spectral_radius(SubDiagram(d, keep)).rho <= rho_all + 1e-12,
                   label(m, "removing a vertex raised rho"));
    }

    auto core = irreducible_core(d);
    auto mu = parry_measure(core);
    auto pr = graph::perron_root(core.local_arrows());
    parry.check(std::fabs(mu.entropy() - std::log(pr.rho)) <= 1e-10, label(m, "Parry entropy off log rho"));
    std::vector<std::vector<int>> dense(core.size(), std::vector<int>(core.size(), 0));
    for (std::size_t i = 0; i < core.size(); ++i)
      for (std::size_t j : core.local_arrows()[i]) dense[i][j] = 1;
    parry.check(std::fabs(oracle::dense_perron(dense) - pr.rho) <= 1e-9 * pr.rho, label(m, "rho disagrees with dense oracle"));

    for (auto& orb : periodic_catalog(map, 4)) {
      if (orb.boundary) continue;
      const std::size_t p = orb.word.size();
      mpq_class x = orb.point.exact(), y = x, sum = 0;
      bool back = true;
      for (std::size_t i = 0; i < p; ++i) {
        int sym = g.exact.symbol(y);
        if (sym != orb.word[i]) back = false;
        if (sym == 0) break;
        sum += y;
        y = g.exact.apply(sym, y);
      }
      birkhoff.check(back && y == x, label(m, "oracle orbit of " + format_word(orb.word, k) + " does not close"));
      Real mean(mpq_class(sum / mpq_class(static_cast<long>(p))));
      auto phi = Observable::identity();
      birkhoff.check(integral(orb, phi) == mean, label(m, "integral differs from oracle mean"));
      birkhoff.check(birkhoff_average(map, orb.point, phi, 3 * p) == mean,
                     label(m, "Birkhoff average over 3 periods not exact"));
    }

    for (std::size_t v = 0; v < d->size(); ++v)
      degree.check(d->arrows()[v].size() <= static_cast<std::size_t>(k), label(m, "out-degree above k"));

    auto small = build_diagram(map, depth - 1);
    for (std::size_t v = 0; v < small->size(); ++v) {
      auto& vx = small->vertex(v);
      auto id = d->find(vx.symbol, vx.interval);
      growth.check(id.has_value() && d->vertex(*id).level == vx.level, label(m, "vertex lost when depth grows"));
    }

    std::uniform_int_distribution<std::size_t> start(0, d->size() - 1);
    for (int walk = 0; walk < 20; ++walk) {
      std::vector<std::size_t> path{start(rng)};
      while (path.size() < 6) {
        auto& out = d->arrows()[path.back()];
        if (out.empty()) break;
        path.push_back(out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)]);
      }
      auto word = project_path(*d, path);
      paths.check(is_admissible(map, word), label(m, "path word " + format_word(word, k) + " not admissible"));
    }
  }

  std::vector<Result> out;
  for (auto* c : all) out.push_back(c->r);
  return out;
}

}  // namespace props
