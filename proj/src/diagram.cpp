#include "pmdyn/diagram.hpp"

#include "pmdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>

namespace pmdyn {

std::size_t MarkovDiagram::arrow_count() const {
  std::size_t n = 0;
  for (const auto& a : arrows_) n += a.size();
  return n;
}

bool MarkovDiagram::has_arrow(std::size_t from, std::size_t to) const {
  if (from >= arrows_.size()) return false;
  const auto& a = arrows_[from];
  return std::find(a.begin(), a.end(), to) != a.end();
}

std::vector<std::size_t> MarkovDiagram::roots() const {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < vertices_.size() && vertices_[i].level == 0; ++i) r.push_back(i);
  return r;
}

std::optional<std::size_t> MarkovDiagram::find(Symbol symbol, const Interval& interval) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto& v = vertices_[i];
    if (v.symbol == symbol && policy_.same_vertex_coord(v.interval.lo, interval.lo) &&
        policy_.same_vertex_coord(v.interval.hi, interval.hi))
      return i;
  }
  return std::nullopt;
}

namespace {

// Exact-mode vertex index keyed by (symbol, lo, hi).
struct VertexKeyLess {
  bool operator()(const std::tuple<Symbol, Real, Real>& a, const std::tuple<Symbol, Real, Real>& b) const {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    int c = compare(std::get<1>(a), std::get<1>(b));
    if (c != 0) return c < 0;
    return compare(std::get<2>(a), std::get<2>(b)) < 0;
  }
};

}  // namespace

std::shared_ptr<const MarkovDiagram> build_diagram(const PiecewiseMonotonicMap& map, std::size_t depth) {
  auto d = std::make_shared<MarkovDiagram>(map.k(), depth, map.policy());
  const auto& p = map.policy();
  std::map<std::tuple<Symbol, Real, Real>, std::size_t, VertexKeyLess> exact_index;
  std::vector<std::vector<std::size_t>> by_symbol(static_cast<std::size_t>(map.k()) + 1);

  auto lookup = [&](Symbol s, const Interval& iv) -> std::optional<std::size_t> {
    if (p.exact) {
      auto it = exact_index.find({s, iv.lo, iv.hi});
      if (it == exact_index.end()) return std::nullopt;
      return it->second;
    }
    for (std::size_t id : by_symbol[static_cast<std::size_t>(s)]) {
      const auto& v = d->vertices_[id];
      if (p.same_vertex_coord(v.interval.lo, iv.lo) && p.same_vertex_coord(v.interval.hi, iv.hi)) return id;
    }
    return std::nullopt;
  };
  auto insert = [&](Symbol s, Interval iv, std::size_t level) {
    std::size_t id = d->vertices_.size();
    if (p.exact) exact_index.emplace(std::make_tuple(s, iv.lo, iv.hi), id);
    by_symbol[static_cast<std::size_t>(s)].push_back(id);
    d->vertices_.push_back({s, std::move(iv), level});
    d->arrows_.emplace_back();
    return id;
  };

  std::vector<std::size_t> frontier;
  for (Symbol j = 1; j <= map.k(); ++j) frontier.push_back(insert(j, map.partition_closure(j), 0));

  bool closed = true;
  for (std::size_t level = 0; !frontier.empty(); ++level) {
    std::vector<std::size_t> next;
    for (std::size_t id : frontier) {
      // Successors: cl(I_j) ∩ T(D) for every j with a nondegenerate intersection.
      Symbol s = d->vertices_[id].symbol;
      Interval image = snap_to_partition(map, map.branch(s).image_of(d->vertices_[id].interval));
      for (Symbol j = 1; j <= map.k(); ++j) {
        Interval c = intersect_closed(map.partition_closure(j), image);
        if (!c.positive_length(p)) continue;
        auto target = lookup(j, c);
        if (!target) {
          if (level >= depth) {
            closed = false;
            continue;
          }
          target = insert(j, std::move(c), level + 1);
          next.push_back(*target);
        }
        d->arrows_[id].push_back(*target);
      }
    }
    frontier = std::move(next);
  }
  d->saturated_ = closed;
  return d;
}

// ---------------------------------------------------------------------------

SubDiagram::SubDiagram(std::shared_ptr<const MarkovDiagram> parent, std::vector<std::size_t> vertex_set)
    : parent_(std::move(parent)), vertices_(std::move(vertex_set)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  for (std::size_t v : vertices_)
    if (v >= parent_->size()) throw Error(ErrorCode::InvalidArgument, "vertex id " + std::to_string(v) + " not in diagram");
  local_ = graph::induced(parent_->arrows(), vertices_);
  for (auto& row : local_) std::sort(row.begin(), row.end());
}

bool SubDiagram::entry(std::size_t i, std::size_t j) const {
  return std::binary_search(local_.at(i).begin(), local_.at(i).end(), j);
}

std::optional<std::size_t> SubDiagram::local_index(std::size_t parent_id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), parent_id);
  if (it == vertices_.end() || *it != parent_id) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

bool SubDiagram::strongly_connected() const {
  if (vertices_.empty()) return false;
  auto comps = graph::strongly_connected_components(local_);
  return comps.size() == 1 && graph::is_cyclic(local_, comps.front());
}

SubDiagram level_truncation(const std::shared_ptr<const MarkovDiagram>& d, std::size_t max_level) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < d->size(); ++i)
    if (d->vertex(i).level <= max_level) ids.push_back(i);
  return SubDiagram(d, std::move(ids));
}

SubDiagram whole(const std::shared_ptr<const MarkovDiagram>& d) { return level_truncation(d, d->depth()); }

std::vector<SubDiagram> components(const SubDiagram& s) {
  std::vector<SubDiagram> out;
  for (const auto& comp : graph::strongly_connected_components(s.local_arrows())) {
    std::vector<std::size_t> ids;
    for (std::size_t i : comp) ids.push_back(s.vertices()[i]);
    out.emplace_back(s.parent_ptr(), std::move(ids));
  }
  return out;
}

SubDiagram irreducible_core(const SubDiagram& s) {
  std::optional<SubDiagram> best;
  double best_rho = -1.0;
  for (auto& comp : components(s)) {
    if (!graph::is_cyclic(comp.local_arrows(), {0}) && comp.size() == 1) continue;
    double rho = graph::perron_root(comp.local_arrows()).rho;
    bool better = false;
    if (!best) better = true;
    else if (rho > best_rho * (1 + 1e-12) + 1e-15) better = true;
    else if (rho >= best_rho * (1 - 1e-12) - 1e-15) {
      // tie on spectral radius
      if (comp.size() < best->size()) better = true;
      else if (comp.size() == best->size() && comp.vertices().front() < best->vertices().front()) better = true;
    }
    if (better) {
      best_rho = rho;
      best = std::move(comp);
    }
  }
  if (!best) throw Error(ErrorCode::NoCycle, "no strongly connected component carries a cycle");
  return *best;
}

SubDiagram irreducible_core(const std::shared_ptr<const MarkovDiagram>& d) { return irreducible_core(whole(d)); }

graph::PerronRoot spectral_radius(const SubDiagram& s) {
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "spectral radius of an empty subdiagram");
  graph::PerronRoot best;
  for (const auto& comp : graph::strongly_connected_components(s.local_arrows())) {
    if (!graph::is_cyclic(s.local_arrows(), comp)) continue;
    auto root = graph::perron_root(graph::induced(s.local_arrows(), comp));
    if (root.rho > best.rho) best = root;
  }
  return best;
}

double spectral_radius_entropy(const SubDiagram& s) {
  double rho = spectral_radius(s).rho;
  return rho > 1.0 ? std::log(rho) : 0.0;
}

// ---------------------------------------------------------------------------

namespace {

// Fixed-width bitset over local vertex indices.
struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1u; }
  bool any() const {
    for (auto x : w)
      if (x) return true;
    return false;
  }
  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] & o.w[i]) return true;
    return false;
  }
  bool operator<(const Bits& o) const { return w < o.w; }
  bool operator==(const Bits& o) const { return w == o.w; }
};

struct BitGraph {
  std::size_t n;
  std::vector<Bits> succ;
  std::vector<Bits> with_symbol;  // index by symbol

  BitGraph(const SubDiagram& s) : n(s.size()) {
    succ.assign(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j : s.local_arrows()[i]) succ[i].set(j);
    with_symbol.assign(static_cast<std::size_t>(s.parent().k()) + 1, Bits(n));
    for (std::size_t i = 0; i < n; ++i) with_symbol[static_cast<std::size_t>(s.symbol(i))].set(i);
  }

  Bits step(const Bits& from) const {
    Bits out(n);
    for (std::size_t i = 0; i < n; ++i)
      if (from.test(i))
        for (std::size_t b = 0; b < out.w.size(); ++b) out.w[b] |= succ[i].w[b];
    return out;
  }
  Bits restrict(Bits b, Symbol s) const {
    const auto& m = with_symbol[static_cast<std::size_t>(s)];
    for (std::size_t i = 0; i < b.w.size(); ++i) b.w[i] &= m.w[i];
    return b;
  }
};

Bits to_bits(const std::vector<bool>& v) {
  Bits b(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) b.set(i);
  return b;
}

}  // namespace

SpecificationCertificate specification_gap(const SubDiagram& s, std::size_t test_len) {
  if (!s.strongly_connected())
    throw Error(ErrorCode::NotStronglyConnected, "specification gap needs a strongly connected subdiagram");
  const auto& adj = s.local_arrows();
  const std::size_t n = s.size();

  // dist0: BFS distances; dist1(u,v) = shortest path with >= 1 arrow;
  // dist2(u,v) = shortest path with >= 2 arrows.
  std::vector<std::vector<std::size_t>> dist0(n, std::vector<std::size_t>(n));
  for (std::size_t u = 0; u < n; ++u) {
    auto d = graph::bfs_distances(adj, u);
    for (std::size_t v = 0; v < n; ++v) dist0[u][v] = *d[v];
  }
  auto min_over_succ = [&](const std::vector<std::vector<std::size_t>>& dist) {
    std::vector<std::vector<std::size_t>> out(n, std::vector<std::size_t>(n, static_cast<std::size_t>(-1)));
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t w : adj[u])
        for (std::size_t v = 0; v < n; ++v) out[u][v] = std::min(out[u][v], dist[w][v] + 1);
    return out;
  };
  auto dist1 = min_over_succ(dist0);
  auto dist2 = min_over_succ(dist1);

  SpecificationCertificate cert;
  cert.test_len = test_len;
  std::size_t max1 = 0, max2 = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      max1 = std::max(max1, dist1[u][v]);
      max2 = std::max(max2, dist2[u][v]);
    }
  cert.gap = max1 - 1;
  cert.gap_positive = max2 - 1;

  // Exhaustive check over the projected language.
  BitGraph g(s);
  ProjectedLanguage lang(s);
  std::map<Bits, std::uint64_t> ends, starts;
  struct Item {
    Word w;
    Bits end;
  };
  std::vector<Item> layer;
  for (Symbol a = 1; a <= s.parent().k(); ++a) {
    Bits b = g.with_symbol[static_cast<std::size_t>(a)];
    if (b.any()) layer.push_back({Word{a}, b});
  }
  for (std::size_t len = 1; len <= test_len && !layer.empty(); ++len) {
    std::vector<Item> next;
    for (auto& item : layer) {
      ++cert.words_checked;
      ++ends[item.end];
      ++starts[to_bits(lang.start_set(item.w))];
      if (len == test_len) continue;
      Bits reach = g.step(item.end);
      for (Symbol a = 1; a <= s.parent().k(); ++a) {
        Bits e = g.restrict(reach, a);
        if (!e.any()) continue;
        Word w = item.w;
        w.push_back(a);
        next.push_back({std::move(w), std::move(e)});
      }
    }
    layer = std::move(next);
  }

  const std::size_t search_cap = std::max(cert.gap, cert.gap_positive) + 1;
  cert.verified = true;
  for (const auto& [end, end_count] : ends) {
    for (const auto& [start, start_count] : starts) {
      cert.pairs_checked += end_count * start_count;
      std::optional<std::size_t> best0, best1;
      Bits reach = g.step(end);  // vertices right after x
      for (std::size_t len = 0; len <= search_cap && !(best0 && best1); ++len) {
        if (reach.intersects(start)) {
          if (!best0) best0 = len;
          if (!best1 && len >= 1) best1 = len;
        }
        reach = g.step(reach);
      }
      if (!best0 || *best0 > cert.gap || !best1 || *best1 > cert.gap_positive) cert.verified = false;
      cert.worst_connector = std::max(cert.worst_connector, best0.value_or(search_cap + 1));
      cert.worst_connector_positive = std::max(cert.worst_connector_positive, best1.value_or(search_cap + 1));
    }
  }
  return cert;
}

Word project_path(const MarkovDiagram& d, const std::vector<std::size_t>& path) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
  Word w;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= d.size()) throw Error(ErrorCode::BrokenPath, "unknown vertex " + std::to_string(path[i]), i);
    if (i + 1 < path.size() && !d.has_arrow(path[i], path[i + 1]))
      throw Error(ErrorCode::BrokenPath,
                  "no arrow " + std::to_string(path[i]) + " -> " + std::to_string(path[i + 1]) + " at position " +
                      std::to_string(i),
                  i);
    w.push_back(d.vertex(path[i]).symbol);
  }
  return w;
}

// ---------------------------------------------------------------------------

ProjectedLanguage::ProjectedLanguage(const SubDiagram& s) : sub_(s), reverse_(graph::transpose(s.local_arrows())) {}

std::vector<bool> ProjectedLanguage::end_set(const Word& w) const {
  const std::size_t n = sub_.size();
  std::vector<bool> cur(n, false);
  if (w.empty()) return cur;
  for (std::size_t i = 0; i < n; ++i) cur[i] = sub_.symbol(i) == w[0];
  for (std::size_t m = 1; m < w.size(); ++m) {
    std::vector<bool> next(n, false);
    for (std::size_t i = 0; i < n; ++i)
      if (cur[i])
        for (std::size_t j : sub_.local_arrows()[i])
          if (sub_.symbol(j) == w[m]) next[j] = true;
    cur = std::move(next);
  }
  return cur;
}

std::vector<bool> ProjectedLanguage::start_set(const Word& w) const {
  const std::size_t n = sub_.size();
  std::vector<bool> cur(n, false);
  if (w.empty()) return cur;
  for (std::size_t i = 0; i < n; ++i) cur[i] = sub_.symbol(i) == w.back();
  for (std::size_t m = w.size() - 1; m-- > 0;) {
    std::vector<bool> prev(n, false);
    for (std::size_t j = 0; j < n; ++j)
      if (cur[j])
        for (std::size_t i : reverse_[j])
          if (sub_.symbol(i) == w[m]) prev[i] = true;
    cur = std::move(prev);
  }
  return cur;
}

bool ProjectedLanguage::contains(const Word& w) const {
  auto e = end_set(w);
  return std::find(e.begin(), e.end(), true) != e.end();
}

std::optional<Word> ProjectedLanguage::connector(const Word& u, const Word& v, std::size_t max_len) const {
  BitGraph g(sub_);
  Bits after_u = to_bits(end_set(u));
  Bits before_v = to_bits(start_set(v));
  if (!after_u.any() || !before_v.any()) return std::nullopt;
  const int k = sub_.parent().k();
  for (std::size_t len = 0; len <= max_len; ++len) {
    // Depth-first in lexicographic order over connectors of this length.
    struct Frame {
      Bits ends;
      Word z;
    };
    std::vector<Frame> stack{{after_u, {}}};
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      Bits reach = g.step(f.ends);
      if (f.z.size() == len) {
        if (reach.intersects(before_v)) return f.z;
        continue;
      }
      for (Symbol a = static_cast<Symbol>(k); a >= 1; --a) {
        Bits e = g.restrict(reach, a);
        if (!e.any()) continue;
        Word z = f.z;
        z.push_back(a);
        stack.push_back({std::move(e), std::move(z)});
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string to_dot(const MarkovDiagram& d) {
  std::ostringstream os;
  os << "digraph markov_diagram {\n";
  os << "  // depth=" << d.depth() << " saturated=" << (d.saturated() ? "true" : "false") << "\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& v = d.vertex(i);
    os << "  v" << i << " [label=\"" << v.symbol << ":[" << v.interval.lo << ',' << v.interval.hi << "]@" << v.level
       << "\"];\n";
  }
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j : d.arrows()[i]) os << "  v" << i << " -> v" << j << ";\n";
  os << "}\n";
  return os.str();
}

std::string vertex_csv(const MarkovDiagram& d) {
  std::ostringstream os;
  os << "id,symbol,lo,hi,level\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& v = d.vertex(i);
    os << i << ',' << v.symbol << ',' << v.interval.lo << ',' << v.interval.hi << ',' << v.level << '\n';
  }
  return os.str();
}

std::string edge_csv(const MarkovDiagram& d) {
  std::ostringstream os;
  os << "source,target\n";
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j : d.arrows()[i]) os << i << ',' << j << '\n';
  return os.str();
}

}  // namespace pmdyn
