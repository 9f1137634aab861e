#include "doctest.h"

#include "oracles.hpp"

#include "pmdyn/config.hpp"
#include "pmdyn/errors.hpp"
#include "pmdyn/irregular.hpp"

#include <cmath>

using namespace pmdyn;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

PiecewiseMonotonicMap doubling() { return make_map(BetaSpec{Real(2)}); }
PiecewiseMonotonicMap golden() { return make_map(BetaSpec{Real::parse("golden")}); }
PiecewiseMonotonicMap from_file(const char* name) {
  return make_map(parse_map_spec_file(std::string(PMDYN_MAPS_DIR) + "/" + name));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("diagram: golden and doubling") {
  auto g = build_diagram(golden(), 4);
  CHECK(g->saturated());
  CHECK(g->size() == 2);
  CHECK(g->has_arrow(0, 0));
  CHECK(g->has_arrow(0, 1));
  CHECK(g->has_arrow(1, 0));
  CHECK_FALSE(g->has_arrow(1, 1));
  auto d = build_diagram(doubling(), 3);
  CHECK(d->saturated());
  CHECK(d->arrow_count() == 4);
  CHECK(d->roots() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("diagram: linear mod one grows with depth") {
  auto map = from_file("linear_mod_one.map");
  auto d8 = build_diagram(map, 8);
  auto d4 = build_diagram(map, 4);
  CHECK(d8->size() > d4->size());
  CHECK(level_truncation(d8, 4).size() == d4->size());
  for (std::size_t v = 0; v < d8->size(); ++v) CHECK(d8->arrows()[v].size() <= 3);
}

TEST_CASE("diagram: cores, components and paths") {
  auto g = build_diagram(golden(), 6);
  auto core = irreducible_core(g);
  CHECK(core.size() == 2);
  CHECK(core.strongly_connected());
  CHECK(std::fabs(spectral_radius(core).rho - kGolden) < 1e-12);
  CHECK(project_path(*g, {0, 1, 0, 0}) == Word{1, 2, 1, 1});
  try {
    project_path(*g, {0, 1, 1});
    FAIL("expected BrokenPath");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BrokenPath);
    CHECK(e.index() == std::optional<std::size_t>(1));
  }
  SubDiagram line(g, {1});
  CHECK(code_of([&] { irreducible_core(line); }) == ErrorCode::NoCycle);
  CHECK(spectral_radius_entropy(line) == 0.0);
}

TEST_CASE("diagram: specification gap against the exhaustive connector oracle") {
  auto core = irreducible_core(build_diagram(golden(), 4));
  auto cert = specification_gap(core, 6);
  auto ref = oracle::golden_connectors(6);
  CHECK(cert.verified);
  CHECK(cert.gap == 1);
  CHECK(cert.gap == ref.worst);
  CHECK(cert.worst_connector == ref.worst);
  CHECK(cert.pairs_checked == ref.pairs);
  ProjectedLanguage lang(core);
  CHECK(lang.contains(Word{1, 2, 1, 2}));
  CHECK_FALSE(lang.contains(Word{1, 2, 2}));
  CHECK(lang.connector(Word{2}, Word{2}, 3) == std::optional<Word>(Word{1}));
  CHECK(lang.connector(Word{1}, Word{2}, 3) == std::optional<Word>(Word{}));

  auto d = irreducible_core(build_diagram(doubling(), 3));
  CHECK(specification_gap(d, 5).gap == 0);
}

TEST_CASE("diagram: exports") {
  auto g = build_diagram(golden(), 4);
  CHECK(vertex_csv(*g).rfind("id,symbol,lo,hi,level\n", 0) == 0);
  CHECK(edge_csv(*g).rfind("source,target\n", 0) == 0);
  auto dot = to_dot(*g);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
}

TEST_CASE("entropy: doubling is exactly log 2") {
  auto e = entropy_word_count(doubling(), 10);
  CHECK(e.value == std::log(2.0));
  auto s = entropy_spectral_sequence(doubling(), {3});
  REQUIRE(s.size() == 1);
  CHECK(s[0].value == std::log(2.0));
  CHECK(s[0].direction == BoundDirection::LowerBound);
}

TEST_CASE("entropy: golden word counts follow the Fibonacci oracle") {
  auto g = golden();
  double prev = 1e9;
  for (std::size_t n = 4; n <= 16; n += 4) {
    auto e = entropy_word_count(g, n);
    CHECK(e.value == doctest::Approx(std::log(static_cast<double>(oracle::golden_count(n))) / n).epsilon(1e-14));
    CHECK(e.value < prev);
    prev = e.value;
  }
  CHECK(std::fabs(prev - std::log(kGolden)) < 0.05);
  auto s = entropy_spectral_sequence(g, {2, 4});
  CHECK(std::fabs(s.back().value - std::log(kGolden)) < 1e-12);
  CHECK(code_of([&] { entropy_spectral_sequence(g, {4, 2}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("entropy: irregular-set formula over components") {
  std::vector<ComponentReport> reports(2);
  reports[0].entropy.value = std::log(2.0);
  reports[0].spread_max = 0.2;
  reports[1].entropy.value = std::log(3.0);
  auto r = irregular_entropy_formula(reports, 1e-12);
  CHECK_FALSE(r.empty);
  CHECK(r.value == std::log(2.0));
  CHECK(r.qualifying == std::vector<std::size_t>{0});
  reports[0].spread_max = 0.0;
  CHECK(irregular_entropy_formula(reports, 1e-12).empty);
  CHECK(entropy_csv({}).rfind("method,param,value,direction", 0) == 0);
}

TEST_CASE("measures: doubling catalog against fixed-point enumeration") {
  auto map = doubling();
  auto catalog = periodic_catalog(map, 3);
  auto ref = oracle::doubling_orbits(3);
  std::vector<PeriodicOrbit> interior;
  for (auto& o : catalog)
    if (!o.boundary) interior.push_back(o);
  REQUIRE(interior.size() == ref.size());
  auto phi = Observable::identity();
  for (auto& r : ref) {
    bool matched = false;
    for (auto& o : interior) {
      std::vector<mpq_class> pts;
      for (auto& x : o.orbit) pts.push_back(x.exact());
      std::sort(pts.begin(), pts.end());
      if (pts != r.points) continue;
      matched = true;
      auto v = integral(o, phi);
      CHECK(v.is_exact());
      CHECK(v.exact() == r.mean);
    }
    CHECK(matched);
  }
}

TEST_CASE("measures: periodic words and realisation") {
  auto g = golden();
  auto words = find_periodic_words(g, 4);
  for (auto& w : words) CHECK(oracle::avoids_22(std::vector<int>(w.begin(), w.end())));
  auto o = realize_periodic_point(doubling(), Word{1, 1, 2});
  CHECK(o.point == Real::ratio(1, 7));
  CHECK(birkhoff_average(doubling(), o.point, Observable::identity(), 9) == Real::ratio(1, 3));
  auto s = average_spread(doubling(), Observable::identity(), 3);
  CHECK(s.min == Real::ratio(1, 3));
  CHECK(s.max == Real::ratio(2, 3));
  CHECK(code_of([] { average_spread(doubling(), Observable::identity(), 0); }) == ErrorCode::NoPeriodicOrbits);
}

TEST_CASE("measures: observables") {
  auto pl = Observable::parse("pl:0:0,1/2:1,1:0", 2);
  CHECK(pl.value(Real::ratio(1, 4)) == Real::ratio(1, 2));
  CHECK(pl.lipschitz() == doctest::Approx(2.0));
  auto ind = Observable::parse("indicator:2", 2);
  CHECK(ind.is_symbolic());
  CHECK(ind.value(Word{2, 1}) == Real(1));
  CHECK(ind.value(Word{1, 2}) == Real(0));
  CHECK(Observable::parse("const:3/4", 2).value(Real(0)) == Real::ratio(3, 4));
  CHECK(code_of([] { Observable::parse("pl:0:0,1/2:1", 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("measures: Parry measure on the golden core") {
  auto core = irreducible_core(build_diagram(golden(), 4));
  auto mu = parry_measure(core);
  CHECK(std::fabs(mu.entropy() - std::log(kGolden)) < 1e-12);
  double sum = 0.0;
  for (double p : mu.stationary) sum += p;
  CHECK(std::fabs(sum - 1.0) < 1e-14);
  // Frequency of symbol 2 in the golden-mean shift is 1 / (beta^2 + 1).
  double freq2 = 1.0 / (kGolden * kGolden + 1.0);
  CHECK(std::fabs(markov_integral(golden(), mu, Observable::indicator({2})) - freq2) < 1e-12);
}

TEST_CASE("measures: decomposition over invariant components") {
  auto map = from_file("two_component.map");
  auto phi = Observable::parse("pl:0:0,1/2:1/2,1:1/2", map.k());
  auto reps = decompose(map, parse_components("0,1/2,1"), phi, 6, 4);
  REQUIRE(reps.size() == 2);
  CHECK(std::fabs(reps[0].entropy.value - std::log(2.0)) < 1e-12);
  CHECK(std::fabs(reps[1].entropy.value - std::log(3.0)) < 1e-12);
  CHECK(reps[0].spread() > 0.1);
  CHECK(reps[1].spread() == 0.0);
  auto r = irregular_entropy_formula(reps, kSpreadTolerance);
  CHECK(std::fabs(r.value - std::log(2.0)) < 1e-12);
}

TEST_CASE("irregular: connectors and junctions") {
  auto g = golden();
  auto core = irreducible_core(build_diagram(g, 6));
  CHECK(find_connector(core, Word{1, 2}, Word{2}) == Word{1});
  CHECK(find_connector(core, Word{1}, Word{1}) == Word{});
  IrregularSpec bad{{2}, {1}, {}, {}, {}};
  CHECK(code_of([&] { construct_irregular_sequence(g, bad); }) == ErrorCode::InadmissibleJunction);
  IrregularSpec zero{{1}, {1, 2}, {}, {}, {{}, 4.0, 0}};
  CHECK(code_of([&] { construct_irregular_sequence(g, zero); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("irregular: block-end averages match the direct finite sum") {
  auto map = doubling();
  IrregularSpec spec{{1, 1, 2}, {1, 2}, {}, {}, {{}, 4.0, 20000}};
  auto seq = construct_irregular_sequence(map, spec);
  REQUIRE(seq.blocks.size() >= 3);
  auto first = seq.blocks.front();
  CHECK(first.end - first.word_start == 12);  // 2 lcm(3, 2)
  auto rep = oscillation_check(map, Observable::identity(), seq, spec);
  std::vector<std::size_t> ends;
  for (auto& b : seq.blocks) ends.push_back(b.end);
  auto s = seq.stream.prefix(seq.horizon + 64);
  auto ref = oracle::doubling_block_averages(std::vector<int>(s.begin(), s.end()), ends);
  REQUIRE(rep.checkpoints.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::fabs(rep.checkpoints[i].average - ref[i]) < 1e-9);
  CHECK_FALSE(rep.inadmissible_at.has_value());
  CHECK(rep.tail_gap > 0.1);
}

TEST_CASE("irregular: certificate search on the golden map") {
  auto g = golden();
  auto cert = proposition31_search(g, Observable::indicator({2}), 0.1, 12, 6);
  CHECK(cert.saturated);
  CHECK(cert.subdiagram.size() == 2);
  CHECK(cert.gap.gap == 1);
  CHECK(cert.separation() >= 0.5);
  CHECK(std::fabs(cert.entropy_lb - std::log(kGolden)) < 1e-12);
  CHECK(cert.verification.all());
  CHECK(cert.verification.gap_sha256.size() == 64);
  CHECK(code_of([&] { proposition31_search(g, Observable::constant(Real(1)), 0.1, 12, 6); }) ==
        ErrorCode::SpreadZero);
  CHECK(code_of([&] { proposition31_search(g, Observable::indicator({2}), 0.1, 12, 6, 2.0); }) ==
        ErrorCode::EntropyShortfall);
}
