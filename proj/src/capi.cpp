#include "pmdyn/pmdyn.h"

#include "pmdyn/config.hpp"
#include "pmdyn/errors.hpp"
#include "pmdyn/irregular.hpp"

#include "json.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>

struct pmdyn_map {
  pmdyn::MapSpec spec;
  pmdyn::PiecewiseMonotonicMap map;
};

struct pmdyn_diagram {
  std::shared_ptr<const pmdyn::MarkovDiagram> d;
};

namespace {

thread_local std::string last_error;

pmdyn_status status_of(pmdyn::ErrorCode c) {
  using pmdyn::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidArgument: return PMDYN_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return PMDYN_ERR_PARSE;
    case ErrorCode::Domain: return PMDYN_ERR_DOMAIN;
    case ErrorCode::ModeMismatch: return PMDYN_ERR_MODE_MISMATCH;
    case ErrorCode::BoundaryHit: return PMDYN_ERR_BOUNDARY_HIT;
    case ErrorCode::InadmissiblePrefix:
    case ErrorCode::InadmissibleJunction:
    case ErrorCode::BrokenPath: return PMDYN_ERR_INADMISSIBLE;
    case ErrorCode::BudgetExceeded: return PMDYN_BUDGET_EXCEEDED;
    case ErrorCode::NoCycle: return PMDYN_ERR_NO_CYCLE;
    case ErrorCode::NonConvergence: return PMDYN_ERR_NON_CONVERGENCE;
    case ErrorCode::NotStronglyConnected: return PMDYN_ERR_NOT_STRONGLY_CONNECTED;
    case ErrorCode::NoFixedPoint: return PMDYN_ERR_NO_FIXED_POINT;
    case ErrorCode::NoPeriodicOrbits: return PMDYN_ERR_NO_PERIODIC_ORBITS;
    case ErrorCode::NoPath: return PMDYN_ERR_NO_PATH;
    case ErrorCode::SpreadZero: return PMDYN_SPREAD_ZERO;
    case ErrorCode::EntropyShortfall: return PMDYN_ENTROPY_SHORTFALL;
  }
  return PMDYN_ERR_INTERNAL;
}

template <class F>
pmdyn_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return PMDYN_OK;
  } catch (const pmdyn::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown exception";
  }
  return PMDYN_ERR_INTERNAL;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw pmdyn::Error(pmdyn::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

pmdyn_map* make(pmdyn::MapSpec spec, pmdyn_mode mode) {
  auto map = pmdyn::make_map(spec);
  if (mode == PMDYN_MODE_EXACT && !map.exact())
    throw pmdyn::Error(pmdyn::ErrorCode::ModeMismatch, "exact mode requested but the spec has irrational parameters");
  if (mode == PMDYN_MODE_FLOAT && map.exact()) map = map.to_float();
  return new pmdyn_map{std::move(spec), std::move(map)};
}

pmdyn::Observable observable(const pmdyn_map* m, const char* phi) {
  return pmdyn::Observable::parse(phi ? phi : "x", m->map.k());
}

}  // namespace

extern "C" {

const char* pmdyn_last_error(void) { return last_error.c_str(); }
const char* pmdyn_version(void) { return "0.1.0"; }
void pmdyn_string_free(char* s) { std::free(s); }

pmdyn_status pmdyn_map_from_string(const char* text, pmdyn_mode mode, pmdyn_map** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = make(pmdyn::parse_map_spec_text(text), mode);
  });
}

pmdyn_status pmdyn_map_from_file(const char* path, pmdyn_mode mode, pmdyn_map** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = make(pmdyn::parse_map_spec_file(path), mode);
  });
}

void pmdyn_map_free(pmdyn_map* map) { delete map; }

pmdyn_status pmdyn_map_describe(const pmdyn_map* m, char** out) {
  return guarded([&] {
    require(m, "map");
    require(out, "out");
    std::ostringstream os;
    os << pmdyn::normalized_spec(m->spec) << "# mode: " << (m->map.exact() ? "exact" : "float")
       << ", branches: " << m->map.k() << ", endpoints:";
    for (const auto& e : m->map.endpoints()) os << ' ' << e;
    os << '\n';
    *out = dup(os.str());
  });
}

int pmdyn_map_branches(const pmdyn_map* m) { return m ? m->map.k() : 0; }
int pmdyn_map_is_exact(const pmdyn_map* m) { return m && m->map.exact() ? 1 : 0; }

pmdyn_status pmdyn_map_evaluate(const pmdyn_map* m, const char* x, char** out) {
  return guarded([&] {
    require(m, "map");
    require(x, "x");
    require(out, "out");
    *out = dup(pmdyn::evaluate(m->map, m->map.policy().coerce(pmdyn::Real::parse(x))).str());
  });
}

pmdyn_status pmdyn_count_words(const pmdyn_map* m, size_t n, uint64_t* out) {
  return guarded([&] {
    require(m, "map");
    require(out, "out");
    *out = pmdyn::count_words(m->map, n);
  });
}

pmdyn_status pmdyn_diagram_build(const pmdyn_map* m, size_t depth, pmdyn_diagram** out) {
  return guarded([&] {
    require(m, "map");
    require(out, "out");
    *out = new pmdyn_diagram{pmdyn::build_diagram(m->map, depth)};
  });
}

void pmdyn_diagram_free(pmdyn_diagram* d) { delete d; }

pmdyn_status pmdyn_diagram_info(const pmdyn_diagram* d, size_t* vertices, size_t* arrows, int* saturated) {
  return guarded([&] {
    require(d, "diagram");
    if (vertices) *vertices = d->d->size();
    if (arrows) *arrows = d->d->arrow_count();
    if (saturated) *saturated = d->d->saturated() ? 1 : 0;
  });
}

pmdyn_status pmdyn_diagram_dot(const pmdyn_diagram* d, char** out) {
  return guarded([&] {
    require(d, "diagram");
    require(out, "out");
    *out = dup(pmdyn::to_dot(*d->d));
  });
}

pmdyn_status pmdyn_diagram_vertex_csv(const pmdyn_diagram* d, char** out) {
  return guarded([&] {
    require(d, "diagram");
    require(out, "out");
    *out = dup(pmdyn::vertex_csv(*d->d));
  });
}

pmdyn_status pmdyn_diagram_edge_csv(const pmdyn_diagram* d, char** out) {
  return guarded([&] {
    require(d, "diagram");
    require(out, "out");
    *out = dup(pmdyn::edge_csv(*d->d));
  });
}

pmdyn_status pmdyn_diagram_core_entropy(const pmdyn_diagram* d, double* out) {
  return guarded([&] {
    require(d, "diagram");
    require(out, "out");
    *out = pmdyn::spectral_radius_entropy(pmdyn::irreducible_core(d->d));
  });
}

pmdyn_status pmdyn_diagram_core_gap(const pmdyn_diagram* d, size_t test_len, size_t* gap, size_t* gap_positive,
                                    int* verified) {
  return guarded([&] {
    require(d, "diagram");
    auto c = pmdyn::specification_gap(pmdyn::irreducible_core(d->d), test_len);
    if (gap) *gap = c.gap;
    if (gap_positive) *gap_positive = c.gap_positive;
    if (verified) *verified = c.verified ? 1 : 0;
  });
}

pmdyn_status pmdyn_entropy_report(const pmdyn_map* m, size_t n, const size_t* depths, size_t n_depths, char** csv) {
  return guarded([&] {
    require(m, "map");
    require(csv, "csv");
    std::vector<pmdyn::EntropyEstimate> rows;
    if (n > 0) rows.push_back(pmdyn::entropy_word_count(m->map, n));
    if (n_depths > 0) {
      require(depths, "depths");
      auto spec = pmdyn::entropy_spectral_sequence(m->map, std::vector<std::size_t>(depths, depths + n_depths));
      rows.insert(rows.end(), spec.begin(), spec.end());
    }
    *csv = dup(pmdyn::entropy_csv(rows));
  });
}

pmdyn_status pmdyn_periodic_catalog(const pmdyn_map* m, size_t max_period, const char* phi, char** csv) {
  return guarded([&] {
    require(m, "map");
    require(csv, "csv");
    auto orbits = pmdyn::periodic_catalog(m->map, max_period);
    if (phi) {
      auto obs = observable(m, phi);
      *csv = dup(pmdyn::periodic_csv(m->map, orbits, &obs));
    } else {
      *csv = dup(pmdyn::periodic_csv(m->map, orbits, nullptr));
    }
  });
}

pmdyn_status pmdyn_spread(const pmdyn_map* m, const char* phi, size_t max_period, int include_boundary, double* min,
                          double* max, char** witnesses) {
  return guarded([&] {
    require(m, "map");
    auto s = pmdyn::average_spread(m->map, observable(m, phi), max_period, include_boundary != 0);
    if (min) *min = s.min.to_double();
    if (max) *max = s.max.to_double();
    if (witnesses) {
      std::ostringstream os;
      os << "min," << s.min << ',' << pmdyn::format_word(s.argmin, m->map.k()) << '\n'
         << "max," << s.max << ',' << pmdyn::format_word(s.argmax, m->map.k()) << '\n';
      *witnesses = dup(os.str());
    }
  });
}

pmdyn_status pmdyn_irregular(const pmdyn_map* m, const pmdyn_irregular_options* opt, char** checkpoint_csv,
                             char** prefix, double* tail_gap, double* certified_gap_lb, int* certified) {
  return guarded([&] {
    require(m, "map");
    require(opt, "options");
    require(opt->u, "u");
    require(opt->v, "v");
    const int k = m->map.k();
    pmdyn::IrregularSpec spec;
    spec.u = pmdyn::parse_word(opt->u, k);
    spec.v = pmdyn::parse_word(opt->v, k);
    auto core = pmdyn::irreducible_core(pmdyn::build_diagram(m->map, 12));
    spec.z_uv = pmdyn::find_connector(core, spec.u, spec.v);
    spec.z_vu = pmdyn::find_connector(core, spec.v, spec.u);
    spec.schedule.growth = opt->growth > 0 ? opt->growth : pmdyn::kDefaultGrowth;
    spec.schedule.horizon = opt->horizon;
    auto phi = observable(m, opt->phi);
    auto seq = pmdyn::construct_irregular_sequence(m->map, spec);
    auto rep = pmdyn::oscillation_check(m->map, phi, seq, spec);
    if (checkpoint_csv) *checkpoint_csv = dup(pmdyn::checkpoint_csv(rep));
    if (prefix) *prefix = dup(pmdyn::format_word(seq.stream.prefix(std::min(opt->prefix_len, seq.horizon)), k) + "\n");
    if (tail_gap) *tail_gap = rep.tail_gap;
    if (certified_gap_lb) *certified_gap_lb = rep.certified_gap_lb;
    if (certified) *certified = rep.certified ? 1 : 0;
  });
}

pmdyn_status pmdyn_prop31(const pmdyn_map* m, const pmdyn_prop31_options* opt, char** json) {
  pmdyn_status st = guarded([&] {
    require(m, "map");
    require(opt, "options");
    require(json, "json");
    *json = nullptr;
    auto phi = observable(m, opt->phi);
    std::optional<double> target;
    if (opt->has_target) target = opt->target;
    auto cert = pmdyn::proposition31_search(m->map, phi, opt->epsilon, opt->depth_cap, opt->period_cap, target);
    *json = dup(pmdyn::to_json(m->map, cert, phi));
  });
  if (st == PMDYN_SPREAD_ZERO && json) {
    std::string msg = last_error;
    guarded([&] {
      nlohmann::ordered_json j{{"status", "spread_zero"},
                               {"map", m->map.description()},
                               {"observable", opt->phi ? opt->phi : "x"},
                               {"message", msg}};
      *json = dup(j.dump(2) + "\n");
    });
    last_error = msg;
  }
  return st;
}

pmdyn_status pmdyn_decompose(const pmdyn_map* m, const char* components, const char* phi, size_t depth,
                             size_t max_period, char** csv, double* value, int* empty) {
  return guarded([&] {
    require(m, "map");
    require(components, "components");
    auto reports = pmdyn::decompose(m->map, pmdyn::parse_components(components), observable(m, phi), depth,
                                    max_period);
    auto formula = pmdyn::irregular_entropy_formula(reports, pmdyn::kSpreadTolerance);
    if (csv) {
      std::ostringstream os;
      os.precision(17);
      os << "lo,hi,entropy,spread_min,spread_max\n";
      for (const auto& r : reports)
        os << r.interval.lo << ',' << r.interval.hi << ',' << r.entropy.value << ',' << r.spread_min << ','
           << r.spread_max << '\n';
      *csv = dup(os.str());
    }
    if (value) *value = formula.value;
    if (empty) *empty = formula.empty ? 1 : 0;
  });
}

}  // extern "C"
