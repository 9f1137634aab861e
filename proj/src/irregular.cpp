#include "pmdyn/irregular.hpp"

#include "pmdyn/errors.hpp"

#include "json.hpp"
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

namespace pmdyn {

namespace {

bool word_admissible(const PiecewiseMonotonicMap& map, const Word& w) {
  return !first_inadmissible_prefix(map, SymbolStream([&w](std::size_t j) { return w[j]; }, w.size()), w.size());
}

Word concat(std::initializer_list<const Word*> parts) {
  Word out;
  for (const Word* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::InvalidArgument, "SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

}  // namespace

Word find_connector(const SubDiagram& core, const Word& u, const Word& v) {
  std::size_t gap = specification_gap(core, 0).gap;
  ProjectedLanguage lang(core);
  const int k = core.parent().k();
  if (!lang.contains(u)) throw Error(ErrorCode::NoPath, "word " + format_word(u, k) + " is not in the core language");
  if (!lang.contains(v)) throw Error(ErrorCode::NoPath, "word " + format_word(v, k) + " is not in the core language");
  auto z = lang.connector(u, v, gap);
  if (!z)
    throw Error(ErrorCode::NoPath, "no connector of length <= " + std::to_string(gap) + " from " + format_word(u, k) +
                                       " to " + format_word(v, k));
  return *z;
}

std::optional<std::size_t> first_inadmissible_prefix(const PiecewiseMonotonicMap& map, const SymbolStream& s,
                                                     std::size_t n) {
  const auto& p = map.policy();
  Interval follower;
  Symbol prev = 0;
  for (std::size_t m = 0; m < n; ++m) {
    Symbol a = s.at(m);
    if (a < 1 || a > map.k()) return m + 1;
    Interval part = map.partition_closure(a);
    follower = m == 0 ? part : intersect_closed(part, snap_to_partition(map, map.branch(prev).image_of(follower)));
    if (!follower.positive_length(p)) return m + 1;
    prev = a;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

struct StreamState {
  Word u, v, z_uv, z_vu;
  std::vector<std::size_t> lengths;
  double growth;
  std::size_t first_block;
  std::vector<Block> blocks;

  void extend() {
    std::size_t j = blocks.size();
    std::size_t cum = blocks.empty() ? 0 : blocks.back().end;
    bool is_u = j % 2 == 0;
    const Word& w = is_u ? u : v;
    std::size_t target;
    if (j < lengths.size()) target = lengths[j];
    else if (j == 0) target = first_block;
    else target = static_cast<std::size_t>(std::ceil(growth * static_cast<double>(cum)));
    Block b;
    b.start = cum;
    b.is_u = is_u;
    b.connector = j == 0 ? 0 : (is_u ? z_vu.size() : z_uv.size());
    b.word_start = cum + b.connector;
    b.repeats = std::max<std::size_t>(1, target / w.size());
    b.end = b.word_start + b.repeats * w.size();
    blocks.push_back(b);
  }

  Symbol at(std::size_t i) {
    while (blocks.empty() || blocks.back().end <= i) extend();
    auto it = std::upper_bound(blocks.begin(), blocks.end(), i, [](std::size_t x, const Block& b) { return x < b.end; });
    const Block& b = *it;
    const Word& w = b.is_u ? u : v;
    if (i < b.word_start) return (b.is_u ? z_vu : z_uv)[i - b.start];
    return w[(i - b.word_start) % w.size()];
  }
};

}  // namespace

IrregularSequence construct_irregular_sequence(const PiecewiseMonotonicMap& map, const IrregularSpec& spec) {
  const int k = map.k();
  if (spec.u.empty() || spec.v.empty()) throw Error(ErrorCode::InvalidArgument, "periodic words must be nonempty");
  if (spec.schedule.horizon == 0) throw Error(ErrorCode::InvalidArgument, "schedule horizon 0 gives an empty stream");
  if (!(spec.schedule.growth >= 1.0)) throw Error(ErrorCode::InvalidArgument, "growth factor must be >= 1");
  for (std::size_t len : spec.schedule.lengths)
    if (len == 0) throw Error(ErrorCode::InvalidArgument, "block lengths must be positive");
  for (const Word* w : {&spec.u, &spec.v, &spec.z_uv, &spec.z_vu})
    for (Symbol s : *w)
      if (s < 1 || s > k) throw Error(ErrorCode::InvalidArgument, "symbol out of range");

  const Word uu = concat({&spec.u, &spec.u});
  const Word vv = concat({&spec.v, &spec.v});
  const Word uzv = concat({&spec.u, &spec.z_uv, &spec.v});
  const Word vzu = concat({&spec.v, &spec.z_vu, &spec.u});
  for (const Word* w : {&uu, &vv, &uzv, &vzu})
    if (!word_admissible(map, *w))
      throw Error(ErrorCode::InadmissibleJunction, "junction word " + format_word(*w, k) + " is not admissible");

  auto state = std::make_shared<StreamState>();
  state->u = spec.u;
  state->v = spec.v;
  state->z_uv = spec.z_uv;
  state->z_vu = spec.z_vu;
  state->lengths = spec.schedule.lengths;
  state->growth = spec.schedule.growth;
  state->first_block = 2 * std::lcm(spec.u.size(), spec.v.size());

  IrregularSequence seq{SymbolStream([state](std::size_t i) { return state->at(i); }), {}, 0};
  state->at(spec.schedule.horizon);
  for (const auto& b : state->blocks) {
    if (b.end > spec.schedule.horizon) break;
    seq.blocks.push_back(b);
  }
  if (seq.blocks.empty())
    throw Error(ErrorCode::InvalidArgument, "horizon " + std::to_string(spec.schedule.horizon) +
                                                " is shorter than the first block (" +
                                                std::to_string(state->blocks.front().end) + ")");
  seq.horizon = seq.blocks.back().end;
  return seq;
}

OscillationReport oscillation_check(const PiecewiseMonotonicMap& map, const Observable& phi,
                                    const IrregularSequence& seq, const IrregularSpec& spec,
                                    std::vector<std::size_t> checkpoints) {
  if (checkpoints.empty())
    for (const auto& b : seq.blocks) checkpoints.push_back(b.end);
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 0 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "checkpoints must be positive and increasing");
    if (checkpoints[i] > seq.horizon)
      throw Error(ErrorCode::InvalidArgument, "checkpoint " + std::to_string(checkpoints[i]) + " beyond horizon " +
                                                  std::to_string(seq.horizon));
  }
  OscillationReport rep;
  const std::size_t last = checkpoints.back();
  rep.inadmissible_at = first_inadmissible_prefix(map, seq.stream, last);

  // Window length for real observables: cylinders of that length are
  // shorter than 1e-12 when the inverse branches contract.
  const double lambda = map.inverse_contraction();
  std::size_t window = phi.depth();
  if (!phi.is_symbolic()) {
    window = 64;
    if (lambda < 1.0) window = std::min<std::size_t>(64, static_cast<std::size_t>(std::ceil(std::log(1e-12) / std::log(lambda))));
  }
  std::map<Word, double> memo;
  double max_cyl = 0.0;
  auto value_at = [&](std::size_t j) {
    Word w;
    w.reserve(window);
    for (std::size_t i = 0; i < window; ++i) w.push_back(seq.stream.at(j + i));
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    double val;
    if (phi.is_symbolic()) {
      val = phi.value(w).to_double();
    } else {
      Interval cyl = cylinder_interval(map, w);
      max_cyl = std::max(max_cyl, cyl.length().to_double());
      val = phi.value(cyl.midpoint()).to_double();
    }
    memo.emplace(std::move(w), val);
    return val;
  };

  long double sum = 0.0L;
  std::size_t pos = 0;
  for (std::size_t c : checkpoints) {
    for (; pos < c; ++pos) sum += value_at(pos);
    rep.checkpoints.push_back({c, static_cast<double>(sum / static_cast<long double>(c)), std::nullopt, std::nullopt});
  }

  // Targets and certified distances at block ends.
  const double a_u = integral(realize_periodic_point(map, spec.u), phi).to_double();
  const double a_v = integral(realize_periodic_point(map, spec.v), phi).to_double();
  const double osc = phi.oscillation();
  const double tail = phi.is_symbolic() ? static_cast<double>(phi.depth() - 1) * osc
                                        : (lambda < 1.0 ? phi.lipschitz() * lambda / (1.0 - lambda) : HUGE_VAL);
  double delta = 0.0;
  std::optional<double> prev_target;
  std::size_t prev_end = 0;
  std::vector<std::size_t> block_cps;
  for (std::size_t bi = 0, ci = 0; bi < seq.blocks.size(); ++bi) {
    const Block& b = seq.blocks[bi];
    double target = b.is_u ? a_u : a_v;
    double e = static_cast<double>(b.connector) * osc + tail +
               (phi.is_symbolic() ? 0.0 : static_cast<double>(b.end - b.start) * phi.lipschitz() * max_cyl);
    double cum = static_cast<double>(b.end);
    double prev = static_cast<double>(prev_end);
    delta = prev_target ? (prev / cum) * (std::fabs(*prev_target - target) + delta) + e / cum : e / cum;
    prev_target = target;
    prev_end = b.end;
    while (ci < checkpoints.size() && checkpoints[ci] < b.end) ++ci;
    if (ci < checkpoints.size() && checkpoints[ci] == b.end) {
      rep.checkpoints[ci].target = target;
      rep.checkpoints[ci].delta = delta;
      block_cps.push_back(ci);
    }
  }

  rep.inf = rep.sup = rep.checkpoints.front().average;
  for (const auto& c : rep.checkpoints) {
    rep.inf = std::min(rep.inf, c.average);
    rep.sup = std::max(rep.sup, c.average);
  }
  rep.gap = rep.sup - rep.inf;

  bool within = true;
  for (std::size_t ci : block_cps) {
    const auto& c = rep.checkpoints[ci];
    if (std::fabs(c.average - *c.target) > *c.delta + 1e-12) within = false;
  }
  if (block_cps.size() >= 2) {
    const auto& c1 = rep.checkpoints[block_cps[block_cps.size() - 2]];
    const auto& c2 = rep.checkpoints[block_cps.back()];
    rep.tail_gap = std::fabs(c2.average - c1.average);
    rep.certified_gap_lb = std::fabs(*c2.target - *c1.target) - *c1.delta - *c2.delta;
  }
  if (block_cps.size() < 3) rep.note = "fewer than three block ends among the checkpoints";
  else if (!within) rep.note = "a block-end average left its certified band";
  else if (!(rep.certified_gap_lb > 0.0)) rep.note = "certified gap bound is not positive";
  else if (rep.inadmissible_at) rep.note = "stream prefix not admissible";
  rep.certified = rep.note.empty();
  return rep;
}

std::string checkpoint_csv(const OscillationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "index,average,target,delta\n";
  for (const auto& c : r.checkpoints) {
    os << c.index << ',' << c.average << ',';
    if (c.target) os << *c.target;
    os << ',';
    if (c.delta) os << *c.delta;
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

// Cycle inside `comp` (local adjacency) whose vertex symbols spell a power of
// w, as parent ids; nullopt when none exists.
std::optional<std::vector<std::size_t>> cycle_for_word(const SubDiagram& comp, const Word& w) {
  const std::size_t n = comp.size(), p = w.size();
  const auto& adj = comp.local_arrows();
  auto id = [p](std::size_t v, std::size_t phase) { return v * p + phase; };
  for (std::size_t start = 0; start < n; ++start) {
    if (comp.symbol(start) != w[0]) continue;
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(n * p, unset);
    std::deque<std::size_t> queue;
    bool closed = false;
    auto push_succ = [&](std::size_t state) {
      std::size_t v = state / p, phase = state % p, next = (phase + 1) % p;
      for (std::size_t y : adj[v]) {
        if (comp.symbol(y) != w[next]) continue;
        std::size_t s = id(y, next);
        if (s == id(start, 0)) {
          if (!closed) parent[s] = state;
          closed = true;
          continue;
        }
        if (parent[s] != unset) continue;
        parent[s] = state;
        queue.push_back(s);
      }
    };
    push_succ(id(start, 0));
    while (!queue.empty() && !closed) {
      std::size_t s = queue.front();
      queue.pop_front();
      push_succ(s);
    }
    if (!closed) continue;
    std::vector<std::size_t> cycle;
    std::size_t cur = parent[id(start, 0)];
    while (cur != id(start, 0)) {
      cycle.push_back(comp.vertices()[cur / p]);
      cur = parent[cur];
    }
    cycle.push_back(comp.vertices()[start]);
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
  }
  return std::nullopt;
}

// Plain power iteration on A + I, independent of graph::perron_root.
double plain_power_root(const graph::Adjacency& adj) {
  const std::size_t n = adj.size();
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), w(n);
  double rho = 0.0;
  for (int it = 0; it < 200000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = v[i];
      for (std::size_t j : adj[i]) w[i] += v[j];
    }
    double norm = 0.0, vn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      norm += w[i];
      vn += v[i];
    }
    double next = norm / vn - 1.0;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double nw = w[i] / norm;
      change = std::max(change, std::fabs(nw - v[i]));
      v[i] = nw;
    }
    bool done = std::fabs(next - rho) <= 1e-15 * std::max(1.0, next) && change <= 1e-15;
    rho = next;
    if (done) break;
  }
  return rho;
}

// Exhaustive connector check through language membership only.
bool recheck_gap(const SubDiagram& f, std::size_t gap, std::size_t test_len, std::string& summary) {
  ProjectedLanguage lang(f);
  const int k = f.parent().k();
  std::vector<Word> words;
  std::vector<Word> layer{Word{}};
  for (std::size_t len = 1; len <= test_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (Symbol a = 1; a <= k; ++a) {
        Word x = w;
        x.push_back(a);
        if (lang.contains(x)) next.push_back(std::move(x));
      }
    words.insert(words.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  std::vector<Word> connectors{Word{}};
  for (std::size_t len = 1, lo = 0; len <= gap; ++len) {
    std::size_t hi = connectors.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (Symbol a = 1; a <= k; ++a) {
        Word z = connectors[i];
        z.push_back(a);
        connectors.push_back(std::move(z));
      }
    lo = hi;
  }
  std::uint64_t pairs = 0;
  std::size_t worst = 0;
  bool ok = true;
  for (const auto& x : words)
    for (const auto& y : words) {
      ++pairs;
      bool found = false;
      for (const auto& z : connectors) {
        if (lang.contains(concat({&x, &z, &y}))) {
          worst = std::max(worst, z.size());
          found = true;
          break;
        }
      }
      ok = ok && found;
    }
  summary = "words=" + std::to_string(words.size()) + ";pairs=" + std::to_string(pairs) +
            ";gap=" + std::to_string(gap) + ";worst=" + std::to_string(worst) + ";ok=" + (ok ? "1" : "0");
  return ok;
}

}  // namespace

Prop31Certificate proposition31_search(const PiecewiseMonotonicMap& map, const Observable& phi, double epsilon,
                                       std::size_t depth_cap, std::size_t period_cap, std::optional<double> target) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const int k = map.k();

  // Periodic integrals.
  auto catalog = periodic_catalog(map, period_cap);
  std::vector<Real> values;
  for (const auto& o : catalog) values.push_back(integral(o, phi));
  if (values.empty())
    throw Error(ErrorCode::SpreadZero, "no periodic orbits up to period " + std::to_string(period_cap));
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (!((*mx - *mn).to_double() > kSpreadTolerance))
    throw Error(ErrorCode::SpreadZero, "periodic integrals up to period " + std::to_string(period_cap) +
                                           " all equal " + mn->str());

  // Entropy approachability over level truncations.
  auto d = build_diagram(map, depth_cap);
  double h_cap = 0.0;
  try {
    h_cap = spectral_radius_entropy(irreducible_core(whole(d)));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCycle) throw;
  }
  const double h_star = target.value_or(h_cap);
  std::optional<SubDiagram> f1;
  std::size_t f1_depth = 0;
  double best = 0.0;
  for (std::size_t t = 0; t <= depth_cap && !f1; ++t) {
    try {
      auto core = irreducible_core(level_truncation(d, t));
      double h = spectral_radius_entropy(core);
      best = std::max(best, h);
      if (h >= h_star - epsilon) {
        f1 = core;
        f1_depth = t;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoCycle) throw;
    }
  }
  if (!f1) {
    std::ostringstream os;
    os.precision(17);
    os << "best spectral entropy " << best << " up to depth " << depth_cap << " is below " << h_star - epsilon;
    throw Error(ErrorCode::EntropyShortfall, os.str());
  }

  const double reference = markov_integral(map, parry_measure(*f1), phi);

  // Strongly connected component of the truncated diagram containing F_1.
  std::optional<SubDiagram> comp;
  for (auto& c : components(whole(d)))
    if (c.contains(f1->vertices().front())) comp = std::move(c);

  struct Candidate {
    std::size_t index;
    std::vector<std::size_t> cycle;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < catalog.size(); ++i)
    if (auto cyc = cycle_for_word(*comp, catalog[i].word)) candidates.push_back({i, std::move(*cyc)});
  if (candidates.empty()) throw Error(ErrorCode::SpreadZero, "no periodic word has a cycle in the core component");

  const Candidate* per = &candidates.front();
  for (const auto& c : candidates)
    if (std::fabs(values[c.index].to_double() - reference) > std::fabs(values[per->index].to_double() - reference))
      per = &c;
  const Candidate* con = &candidates.front();
  for (const auto& c : candidates)
    if (abs(values[c.index] - values[per->index]) > abs(values[con->index] - values[per->index])) con = &c;
  if (!(abs(values[con->index] - values[per->index]).to_double() > kSpreadTolerance))
    throw Error(ErrorCode::SpreadZero, "periodic words inside the core component share one integral");

  // F = F_1 plus both cycles plus connecting paths inside the component.
  std::vector<std::size_t> f_ids = f1->vertices();
  const auto& cadj = comp->local_arrows();
  const std::size_t anchor = *comp->local_index(f1->vertices().front());
  for (const Candidate* c : {per, con}) {
    f_ids.insert(f_ids.end(), c->cycle.begin(), c->cycle.end());
    const std::size_t entry = *comp->local_index(c->cycle.front());
    for (auto [a, b] : {std::pair{anchor, entry}, std::pair{entry, anchor}})
      if (auto path = graph::shortest_path(cadj, a, b))
        for (std::size_t v : *path) f_ids.push_back(comp->vertices()[v]);
  }
  SubDiagram f(d, f_ids);

  Prop31Certificate cert{f,
                         specification_gap(f, 6),
                         {catalog[per->index].word, values[per->index], catalog[per->index].boundary},
                         {catalog[con->index].word, values[con->index], catalog[con->index].boundary},
                         reference,
                         spectral_radius_entropy(f),
                         h_star,
                         epsilon,
                         depth_cap,
                         f1_depth,
                         f1->size(),
                         d->saturated(),
                         {}};

  // Independent re-verification.
  auto& ver = cert.verification;
  std::string gap_summary;
  ver.gap_ok = cert.gap.verified && recheck_gap(f, cert.gap.gap, cert.gap.test_len, gap_summary);
  ver.gap_sha256 = sha256_hex(gap_summary);

  std::ostringstream av;
  ver.averages_ok = true;
  for (const AverageWitness* w : {&cert.mu_per, &cert.contrast}) {
    Real fresh = integral(realize_periodic_point(map, w->word), phi);
    bool same = map.exact() ? fresh == w->value : std::fabs((fresh - w->value).to_double()) <= 1e-12;
    ver.averages_ok = ver.averages_ok && same;
    av << format_word(w->word, k) << '=' << fresh << ';';
  }
  ver.averages_ok = ver.averages_ok && cert.separation() > kSpreadTolerance;
  ver.averages_sha256 = sha256_hex(av.str());

  double rho = plain_power_root(f.local_arrows());
  double h_fresh = rho > 1.0 ? std::log(rho) : 0.0;
  ver.entropy_ok = std::fabs(h_fresh - cert.entropy_lb) <= 1e-9 && cert.entropy_lb >= h_star - epsilon - 1e-12;
  std::ostringstream es;
  es << std::setprecision(17) << "rho=" << rho << ";h=" << h_fresh;
  ver.entropy_sha256 = sha256_hex(es.str());
  return cert;
}

std::string to_json(const PiecewiseMonotonicMap& map, const Prop31Certificate& c, const Observable& phi) {
  using nlohmann::ordered_json;
  const int k = map.k();
  ordered_json j;
  j["status"] = "ok";
  j["map"] = map.description();
  j["observable"] = phi.description();
  j["epsilon"] = c.epsilon;
  j["depth_cap"] = c.depth_cap;
  j["target_entropy"] = c.target_entropy;
  j["saturated"] = c.saturated;
  ordered_json verts = ordered_json::array();
  for (std::size_t id : c.subdiagram.vertices()) {
    const auto& v = c.subdiagram.parent().vertex(id);
    verts.push_back({{"id", id}, {"symbol", v.symbol}, {"lo", v.interval.lo.str()}, {"hi", v.interval.hi.str()},
                     {"level", v.level}});
  }
  j["subdiagram"] = {{"size", c.subdiagram.size()}, {"f1_depth", c.f1_depth}, {"f1_size", c.f1_size},
                     {"vertices", verts}};
  j["specification"] = {{"gap", c.gap.gap},
                        {"gap_positive", c.gap.gap_positive},
                        {"test_len", c.gap.test_len},
                        {"words_checked", c.gap.words_checked},
                        {"pairs_checked", c.gap.pairs_checked},
                        {"verified", c.gap.verified}};
  auto witness = [&](const AverageWitness& w) {
    return ordered_json{{"word", format_word(w.word, k)},
                        {"value", w.value.str()},
                        {"numeric", w.value.to_double()},
                        {"boundary", w.boundary}};
  };
  j["averages"] = {{"mu_per", witness(c.mu_per)},
                   {"contrast", witness(c.contrast)},
                   {"separation", c.separation()},
                   {"reference_integral", c.reference_integral}};
  j["entropy_lb"] = c.entropy_lb;
  j["verification"] = {{"gap_ok", c.verification.gap_ok},
                       {"averages_ok", c.verification.averages_ok},
                       {"entropy_ok", c.verification.entropy_ok},
                       {"gap_sha256", c.verification.gap_sha256},
                       {"averages_sha256", c.verification.averages_sha256},
                       {"entropy_sha256", c.verification.entropy_sha256}};
  return j.dump(2) + "\n";
}

}  // namespace pmdyn
