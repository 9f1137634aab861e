#include "pmdyn/pmdyn.h"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
  std::string map_path;
  std::string mode = "auto";
  std::string out = ".";
  std::size_t depth = 12;
  std::size_t n = 0;
  std::vector<std::size_t> depths;
  double epsilon = 0.1;
  std::size_t max_period = 6;
  std::size_t horizon = 100000;
  double growth = 4.0;
  std::string phi = "x";
  std::string u, v;
  std::optional<double> target;
  std::string components;
  std::size_t prefix_len = 1000;
  bool include_boundary = false;
};

int exit_code(pmdyn_status st) {
  switch (st) {
    case PMDYN_OK: return 0;
    case PMDYN_SPREAD_ZERO: return 2;
    case PMDYN_ENTROPY_SHORTFALL: return 3;
    case PMDYN_BUDGET_EXCEEDED: return 4;
    default: return 1;
  }
}

struct Owned {
  char* p = nullptr;
  ~Owned() { pmdyn_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

void write_file(const Options& o, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(o.out);
  auto path = std::filesystem::path(o.out) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  std::cerr << "wrote " << path.string() << '\n';
}

pmdyn_mode parse_mode(const std::string& m) {
  if (m == "exact") return PMDYN_MODE_EXACT;
  if (m == "float") return PMDYN_MODE_FLOAT;
  return PMDYN_MODE_AUTO;
}

int fail(pmdyn_status st) {
  std::cerr << "error: " << pmdyn_last_error() << '\n';
  return exit_code(st);
}

int run(const std::string& cmd, const Options& o) {
  pmdyn_map* raw = nullptr;
  if (auto st = pmdyn_map_from_file(o.map_path.c_str(), parse_mode(o.mode), &raw)) return fail(st);
  std::unique_ptr<pmdyn_map, decltype(&pmdyn_map_free)> map(raw, pmdyn_map_free);
  {
    Owned desc;
    if (auto st = pmdyn_map_describe(map.get(), &desc.p)) return fail(st);
    std::cerr << desc.str();
  }

  if (cmd == "diagram") {
    pmdyn_diagram* d = nullptr;
    if (auto st = pmdyn_diagram_build(map.get(), o.depth, &d)) return fail(st);
    std::unique_ptr<pmdyn_diagram, decltype(&pmdyn_diagram_free)> diag(d, pmdyn_diagram_free);
    std::size_t nv = 0, na = 0;
    int sat = 0;
    pmdyn_diagram_info(d, &nv, &na, &sat);
    Owned dot, verts, edges;
    if (auto st = pmdyn_diagram_dot(d, &dot.p)) return fail(st);
    if (auto st = pmdyn_diagram_vertex_csv(d, &verts.p)) return fail(st);
    if (auto st = pmdyn_diagram_edge_csv(d, &edges.p)) return fail(st);
    write_file(o, "diagram.dot", dot.str());
    write_file(o, "vertices.csv", verts.str());
    write_file(o, "edges.csv", edges.str());
    std::cout << "vertices " << nv << "\narrows " << na << "\nsaturated " << (sat ? "true" : "false") << '\n';
    double h = 0.0;
    if (pmdyn_diagram_core_entropy(d, &h) == PMDYN_OK) std::printf("core_entropy %.17g\n", h);
    return 0;
  }
  if (cmd == "entropy") {
    Owned csv;
    auto depths = o.depths.empty() && o.n == 0 ? std::vector<std::size_t>{o.depth} : o.depths;
    if (auto st = pmdyn_entropy_report(map.get(), o.n, depths.data(), depths.size(), &csv.p)) return fail(st);
    write_file(o, "entropy.csv", csv.str());
    std::cout << csv.str();
    return 0;
  }
  if (cmd == "periodic") {
    Owned csv;
    if (auto st = pmdyn_periodic_catalog(map.get(), o.max_period, o.phi.c_str(), &csv.p)) return fail(st);
    write_file(o, "periodic.csv", csv.str());
    std::cout << csv.str();
    return 0;
  }
  if (cmd == "spread") {
    Owned wit;
    double lo = 0, hi = 0;
    if (auto st = pmdyn_spread(map.get(), o.phi.c_str(), o.max_period, o.include_boundary, &lo, &hi, &wit.p))
      return fail(st);
    char line[128];
    std::snprintf(line, sizeof line, "%.17g %.17g\n", lo, hi);
    write_file(o, "spread.txt", std::string(line) + wit.str());
    std::cout << line << wit.str();
    return 0;
  }
  if (cmd == "irregular") {
    pmdyn_irregular_options io{o.u.c_str(), o.v.c_str(), o.phi.c_str(), o.growth, o.horizon, o.prefix_len};
    Owned csv, prefix;
    double tail = 0, lb = 0;
    int cert = 0;
    if (auto st = pmdyn_irregular(map.get(), &io, &csv.p, &prefix.p, &tail, &lb, &cert)) return fail(st);
    write_file(o, "checkpoints.csv", csv.str());
    write_file(o, "prefix.txt", prefix.str());
    std::printf("tail_gap %.17g\ncertified_gap_lb %.17g\ncertified %s\n", tail, lb, cert ? "true" : "false");
    return 0;
  }
  if (cmd == "prop31") {
    pmdyn_prop31_options po{o.phi.c_str(), o.epsilon, o.depth, o.max_period, o.target.has_value(),
                            o.target.value_or(0.0)};
    Owned json;
    auto st = pmdyn_prop31(map.get(), &po, &json.p);
    if (json.p) {
      write_file(o, "certificate.json", json.str());
      std::cout << json.str();
    }
    if (st) return fail(st);
    return 0;
  }
  if (cmd == "decompose") {
    Owned csv;
    double value = 0;
    int empty = 0;
    if (auto st = pmdyn_decompose(map.get(), o.components.c_str(), o.phi.c_str(), o.depth, o.max_period, &csv.p,
                                  &value, &empty))
      return fail(st);
    char line[128];
    std::snprintf(line, sizeof line, "irregular_entropy %.17g\nempty %s\n", value, empty ? "true" : "false");
    write_file(o, "components.csv", csv.str() + "# " + line);
    std::cout << csv.str() << line;
    return 0;
  }
  std::cerr << "unknown command " << cmd << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic dynamics and entropy tools for piecewise monotonic interval maps"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("map", o.map_path, "map spec file")->required()->check(CLI::ExistingFile);
    sub->add_option("--mode", o.mode, "arithmetic mode")->check(CLI::IsMember({"auto", "exact", "float"}));
    sub->add_option("--out", o.out, "output directory");
  };
  auto* diagram = app.add_subcommand("diagram", "Markov diagram as DOT and CSV");
  common(diagram);
  diagram->add_option("--depth", o.depth, "truncation depth");

  auto* entropy = app.add_subcommand("entropy", "word-count and spectral entropy estimates");
  common(entropy);
  entropy->add_option("--n", o.n, "word length for the counting estimate");
  entropy->add_option("--depths", o.depths, "diagram depths")->delimiter(',');
  entropy->add_option("--depth", o.depth, "single diagram depth when --depths is absent");

  auto* periodic = app.add_subcommand("periodic", "periodic orbit catalog");
  common(periodic);
  periodic->add_option("--max-period", o.max_period);
  periodic->add_option("--phi", o.phi, "observable for the integral column");

  auto* spread = app.add_subcommand("spread", "range of periodic integrals");
  common(spread);
  spread->add_option("--max-period", o.max_period);
  spread->add_option("--phi", o.phi);
  spread->add_flag("--include-boundary", o.include_boundary, "keep orbits through partition endpoints");

  auto* irregular = app.add_subcommand("irregular", "irregular point by block concatenation");
  common(irregular);
  irregular->add_option("--u", o.u)->required();
  irregular->add_option("--v", o.v)->required();
  irregular->add_option("--phi", o.phi);
  irregular->add_option("--growth", o.growth);
  irregular->add_option("--horizon", o.horizon);
  irregular->add_option("--prefix-len", o.prefix_len, "symbols written to prefix.txt");

  auto* prop31 = app.add_subcommand("prop31", "specification, contrasting averages and entropy certificate");
  common(prop31);
  prop31->add_option("--phi", o.phi);
  prop31->add_option("--epsilon", o.epsilon);
  prop31->add_option("--depth", o.depth, "depth cap");
  prop31->add_option("--max-period", o.max_period, "period cap");
  prop31->add_option("--target", o.target, "external entropy target");

  auto* decompose = app.add_subcommand("decompose", "entropy of the irregular set over invariant components");
  common(decompose);
  decompose->add_option("--components", o.components, "cut points such as 0,1/2,1")->required();
  decompose->add_option("--phi", o.phi);
  decompose->add_option("--depth", o.depth);
  decompose->add_option("--max-period", o.max_period);

  CLI11_PARSE(app, argc, argv);
  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
