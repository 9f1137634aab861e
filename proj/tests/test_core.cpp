#include "doctest.h"

#include "oracles.hpp"

#include "pmdyn/config.hpp"
#include "pmdyn/errors.hpp"
#include "pmdyn/graph.hpp"
#include "pmdyn/symbolic.hpp"

#include <cmath>

using namespace pmdyn;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

PiecewiseMonotonicMap doubling() { return make_map(BetaSpec{Real(2)}); }
PiecewiseMonotonicMap golden() { return make_map(BetaSpec{Real::parse("golden")}); }

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

TEST_CASE("real: exact parsing and arithmetic") {
  CHECK(Real::parse("3/6") == Real::ratio(1, 2));
  CHECK(Real::parse("1.8") == Real::ratio(9, 5));
  CHECK(Real::parse("2.5e-3") == Real::ratio(1, 400));
  CHECK(Real::parse("-3").is_exact());
  CHECK_FALSE(Real::parse("golden").is_exact());
  CHECK(Real::parse("golden").to_double() == doctest::Approx(kGolden).epsilon(1e-15));
  Real a = Real::ratio(1, 3) + Real::ratio(1, 6);
  CHECK(a.is_exact());
  CHECK(a == Real::ratio(1, 2));
  CHECK_FALSE((a * Real(0.5)).is_exact());
  CHECK(code_of([] { Real::parse("1/x"); }) == ErrorCode::Parse);
  CHECK(code_of([] { Real::parse(""); }) == ErrorCode::Parse);
}

TEST_CASE("real: numeric policy") {
  auto f = NumericPolicy::float_mode();
  CHECK(f.eq(Real(0.1 + 0.2), Real(0.3)));
  CHECK_FALSE(NumericPolicy::exact_mode().eq(Real::ratio(1, 3), Real::ratio(1, 3) + Real::ratio(1, 1000000000)));
  CHECK(f.same_vertex_coord(Real(0.5), Real(0.5 + 1e-11)));
  CHECK_FALSE(f.same_vertex_coord(Real(0.5), Real(0.5 + 1e-9)));
}

TEST_CASE("interval map: construction") {
  auto d = doubling();
  REQUIRE(d.k() == 2);
  CHECK(d.exact());
  CHECK(d.endpoints() == std::vector<Real>{Real(0), Real::ratio(1, 2), Real(1)});

  auto lm = make_map(LinearModOneSpec{Real::ratio(9, 5), Real::ratio(3, 10)});
  CHECK(lm.endpoints()[1] == Real::ratio(7, 18));
  CHECK(lm.branch(1).increasing());
  CHECK(lm.branch(2).increasing());

  AffinePiecesSpec overlap{{Real(0), Real::ratio(1, 2), Real::ratio(1, 3), Real(1)},
                           {Real(2), Real(2), Real(2)},
                           {Real(0), Real(-1), Real(-1)},
                           {}};
  CHECK(code_of([&] { make_map(overlap); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { make_map(BetaSpec{Real(1)}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { make_map(TentSpec{Real(3)}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("interval map: evaluation and orbits") {
  auto d = doubling();
  CHECK(evaluate(d, Real::ratio(1, 3)) == Real::ratio(2, 3));
  CHECK(evaluate(d, Real::ratio(1, 2)) == d.boundary_images()[1]);
  CHECK(evaluate(d, Real::ratio(1, 2)) == Real(1));
  auto lm = make_map(LinearModOneSpec{Real::ratio(9, 5), Real::ratio(3, 10)});
  CHECK(evaluate(lm, Real::ratio(1, 2)) == Real::ratio(1, 5));
  CHECK(code_of([&] { evaluate(d, Real(2)); }) == ErrorCode::Domain);

  auto o = iterate_orbit(d, Real::ratio(1, 3), 4);
  CHECK(o.points == std::vector<Real>{Real::ratio(1, 3), Real::ratio(2, 3), Real::ratio(1, 3), Real::ratio(2, 3)});
  CHECK_FALSE(o.hit_boundary_at.has_value());
  auto b = iterate_orbit(d, Real::ratio(1, 4), 3);
  REQUIRE(b.hit_boundary_at.has_value());
  CHECK(*b.hit_boundary_at == 1);

  auto g = golden();
  auto go = iterate_orbit(g, Real(0.5), 3);
  REQUIRE(go.points.size() == 3);
  double x1 = kGolden * 0.5;
  CHECK(go.points[1].to_double() == doctest::Approx(x1).epsilon(1e-14));
  CHECK(go.points[2].to_double() == doctest::Approx(kGolden * x1 - 1.0).epsilon(1e-12));
  CHECK_FALSE(go.hit_boundary_at.has_value());
}

TEST_CASE("interval map: itineraries and inverse branches") {
  auto d = doubling();
  CHECK(itinerary(d, Real::ratio(1, 3), 4) == Word{1, 2, 1, 2});
  CHECK(itinerary(d, Real::ratio(1, 7), 3) == Word{1, 1, 2});
  try {
    itinerary(d, Real::ratio(1, 2), 1);
    FAIL("expected BoundaryHit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryHit);
    CHECK(e.index() == std::optional<std::size_t>(0));
  }
  CHECK(inverse_branch(d, 2, Real::ratio(1, 3)) == std::optional<Real>(Real::ratio(2, 3)));
  for (int i = 0; i <= 8; ++i) {
    Real y = Real::ratio(i, 8);
    CHECK(inverse_branch(d, 1, y) == std::optional<Real>(y / Real(2)));
  }
  auto g = golden();
  auto pre = inverse_branch(g, 2, Real(0.9));
  // (0.9 + 1) / beta lies beyond 1, outside cl(I_2)
  CHECK((0.9 + 1.0) / kGolden > 1.0);
  CHECK_FALSE(pre.has_value());
  auto pre2 = inverse_branch(g, 2, Real(0.5));
  REQUIRE(pre2.has_value());
  CHECK(pre2->to_double() == doctest::Approx(1.5 / kGolden).epsilon(1e-14));
}

TEST_CASE("interval map: restriction to an invariant component") {
  auto spec = parse_map_spec_file(PMDYN_MAPS_DIR "/two_component.map");
  auto map = make_map(spec);
  REQUIRE(map.k() == 5);
  auto r = restrict_map(map, Interval::closed(Real::ratio(1, 2), Real(1)));
  CHECK(r.map.k() == 3);
  CHECK(r.origin_symbol == std::vector<Symbol>{3, 4, 5});
  CHECK(r.to_original(Real(0)) == Real::ratio(1, 2));
  CHECK(code_of([&] { restrict_map(map, Interval::closed(Real(0), Real::ratio(1, 3))); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("symbolic: cylinders") {
  auto d = doubling();
  auto c12 = cylinder_interval(d, Word{1, 2});
  CHECK(c12.lo == Real::ratio(1, 4));
  CHECK(c12.hi == Real::ratio(1, 2));
  auto c1 = cylinder_interval(d, Word{1});
  CHECK(c1.lo == Real(0));
  CHECK(c1.hi == Real::ratio(1, 2));

  auto g = golden();
  CHECK(cylinder(g, Word{2, 2}).status != Admissibility::Admissible);
  CHECK_FALSE(is_admissible(g, Word{2, 2}));
  CHECK(is_admissible(g, Word{1, 2, 1}));
  for (std::size_t n = 1; n <= 8; ++n)
    for (auto& w : oracle::golden_words(n)) CHECK(is_admissible(g, Word(w.begin(), w.end())));
}

TEST_CASE("symbolic: word counts against the Fibonacci oracle") {
  auto d = doubling();
  CHECK(count_words(d, 3) == 8);
  for (std::size_t n = 1; n <= 12; ++n) CHECK(count_words(d, n) == (std::uint64_t{1} << n));
  auto g = golden();
  CHECK(count_words(g, 2) == 3);
  CHECK(count_words(g, 3) == 5);
  for (std::size_t n = 1; n <= 20; ++n) CHECK(count_words(g, n) == oracle::golden_count(n));
  CHECK(code_of([&] { count_words(d, 30, 1000); }) == ErrorCode::BudgetExceeded);
  auto words = enumerate_words(g, 4);
  auto ref = oracle::golden_words(4);
  REQUIRE(words.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(words[i] == Word(ref[i].begin(), ref[i].end()));
}

TEST_CASE("symbolic: coding map") {
  auto d = doubling();
  auto s = SymbolStream::eventually_periodic({}, {1, 2});
  auto j = phi_point(d, s, 8);
  CHECK(j.contains(Real::ratio(1, 3)));
  CHECK(j.length() == Real::ratio(1, 256));
  auto t = SymbolStream::eventually_periodic({}, {1, 1, 2});
  auto j7 = phi_point(d, t, 9);
  CHECK(j7.contains(Real::ratio(1, 7)));
  CHECK(j7.length() == Real::ratio(1, 512));

  auto g = golden();
  auto z = phi_point(g, SymbolStream::eventually_periodic({}, {1}), 12);
  CHECK(z.lo.to_double() == doctest::Approx(0.0));
  CHECK(z.length().to_double() == doctest::Approx(std::pow(kGolden, -12)).epsilon(1e-9));

  try {
    phi_point(g, SymbolStream::eventually_periodic({1}, {2}), 5);
    FAIL("expected InadmissiblePrefix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InadmissiblePrefix);
    CHECK(e.index() == std::optional<std::size_t>(3));
  }
}

TEST_CASE("symbolic: words and streams") {
  CHECK(format_word({1, 1, 2}, 2) == "112");
  CHECK(parse_word("121", 2) == Word{1, 2, 1});
  CHECK(parse_word("10,2", 12) == Word{10, 2});
  CHECK(code_of([] { parse_word("13", 2); }) == ErrorCode::Parse);
  auto s = SymbolStream::eventually_periodic({2}, {1, 2});
  CHECK(s.prefix(5) == Word{2, 1, 2, 1, 2});
}

TEST_CASE("graph: components and Perron roots") {
  graph::Adjacency a{{1}, {0, 2}, {3}, {2}, {}};
  auto scc = graph::strongly_connected_components(a);
  REQUIRE(scc.size() == 3);
  CHECK(scc[0] == std::vector<std::size_t>{0, 1});
  CHECK(scc[1] == std::vector<std::size_t>{2, 3});
  CHECK_FALSE(graph::is_cyclic(a, scc[2]));

  graph::Adjacency fib{{0, 1}, {0}};
  auto root = graph::perron_root(fib);
  CHECK(std::fabs(root.rho - kGolden) < 1e-14);
  CHECK(graph::characteristic_polynomial(fib) == std::vector<long long>{-1, -1, 1});

  graph::Adjacency full3{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  CHECK(std::fabs(graph::perron_root(full3).rho - 3.0) < 1e-13);

  // Cycle of length 7 with one chord: rho is the root of x^7 - x^3 - 1.
  graph::Adjacency c7(7);
  for (std::size_t i = 0; i < 7; ++i) c7[i].push_back((i + 1) % 7);
  c7[3].push_back(0);
  double rho = graph::perron_root(c7).rho;
  CHECK(std::fabs(std::pow(rho, 7) - std::pow(rho, 3) - 1.0) < 1e-10);
  std::vector<std::vector<int>> dense(7, std::vector<int>(7, 0));
  for (std::size_t i = 0; i < 7; ++i)
    for (auto j : c7[i]) dense[i][j] = 1;
  CHECK(std::fabs(oracle::dense_perron(dense) - rho) < 1e-9);

  auto path = graph::shortest_path(c7, 2, 2);
  REQUIRE(path.has_value());
  CHECK(path->size() == 5);  // 2 3 0 1 2 through the chord
}

TEST_CASE("config: map spec files") {
  auto spec = parse_map_spec_text("# doubling\nfamily = \"beta\"\nbeta = \"2\"\n");
  REQUIRE(std::holds_alternative<BetaSpec>(spec));
  CHECK(std::get<BetaSpec>(spec).beta == Real(2));
  auto again = parse_map_spec_text(normalized_spec(spec));
  CHECK(std::get<BetaSpec>(again).beta == Real(2));

  auto lm = parse_map_spec_file(PMDYN_MAPS_DIR "/linear_mod_one.map");
  REQUIRE(std::holds_alternative<LinearModOneSpec>(lm));
  CHECK(std::get<LinearModOneSpec>(lm).alpha == Real::ratio(3, 10));

  try {
    parse_map_spec_text("family = \"beta\"\nbeta 2\n");
    FAIL("expected Parse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(e.index() == std::optional<std::size_t>(2));
  }
  CHECK(code_of([] { parse_map_spec_text("family = \"beta\"\ncolour = \"red\"\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_map_spec_text("family = \"beta\"\nbeta = \"2\"\nbeta = \"3\"\n"); }) == ErrorCode::Parse);

  auto comps = parse_components("0,1/4;1/2,1");
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].hi == Real::ratio(1, 4));
  CHECK(comps[1].lo == Real::ratio(1, 2));
  CHECK(parse_components("0,1/2,1").size() == 2);
}
