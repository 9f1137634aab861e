#include "pmdyn/graph.hpp"

#include "pmdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace pmdyn::graph {

std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& adj) {
  const std::size_t n = adj.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        std::size_t w = adj[f.v][f.next++];
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

bool is_cyclic(const Adjacency& adj, const std::vector<std::size_t>& component) {
  if (component.size() > 1) return true;
  if (component.empty()) return false;
  std::size_t v = component.front();
  return std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
}

std::vector<std::optional<std::size_t>> bfs_distances(const Adjacency& adj, std::size_t source) {
  std::vector<std::optional<std::size_t>> dist(adj.size());
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v]) {
      if (dist[w]) continue;
      dist[w] = *dist[v] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

std::optional<std::vector<std::size_t>> shortest_path(const Adjacency& adj, std::size_t from, std::size_t to) {
  const std::size_t n = adj.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n, unset);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue;
  auto sorted = [&](std::size_t v) {
    auto s = adj[v];
    std::sort(s.begin(), s.end());
    return s;
  };
  for (std::size_t w : sorted(from)) {
    if (seen[w]) continue;
    seen[w] = true;
    parent[w] = from;
    queue.push_back(w);
  }
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (std::size_t w : sorted(v)) {
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  if (!seen[to]) return std::nullopt;
  std::vector<std::size_t> path{to};
  std::size_t cur = to;
  do {
    cur = parent[cur];
    path.push_back(cur);
  } while (cur != from);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<long long> characteristic_polynomial(const Adjacency& adj) {
  const std::size_t n = adj.size();
  using Mat = std::vector<std::vector<long long>>;
  auto times_a = [&](const Mat& m) {
    Mat out(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j : adj[i])
        for (std::size_t c = 0; c < n; ++c) out[i][c] += m[j][c];
    return out;
  };
  std::vector<long long> c(n + 1, 0);
  c[n] = 1;
  Mat m(n, std::vector<long long>(n, 0));
  for (std::size_t k = 1; k <= n; ++k) {
    Mat am = times_a(m);
    for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
    m = std::move(am);
    Mat amk = times_a(m);
    long long trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += amk[i][i];
    c[n - k] = -trace / static_cast<long long>(k);
  }
  return c;
}

namespace {

// One step of w = (A + I) v.
void shifted_multiply(const Adjacency& adj, const std::vector<double>& v, std::vector<double>& w) {
  for (std::size_t i = 0; i < adj.size(); ++i) {
    double s = v[i];
    for (std::size_t j : adj[i]) s += v[j];
    w[i] = s;
  }
}

struct PowerResult {
  PerronRoot root;
  std::vector<double> vector;
};

PowerResult power_iterate(const Adjacency& adj, double rel_tol, double vec_tol) {
  const std::size_t n = adj.size();
  PowerResult res;
  if (n == 0) return res;
  std::vector<double> v(n, 1.0), w(n);
  double prev_lo = 0.0, prev_hi = 0.0;
  for (std::size_t it = 1; it <= kPerronMaxIter; ++it) {
    shifted_multiply(adj, v, w);
    double lo = HUGE_VAL, hi = 0.0, top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(v[i] > 0.0))
        throw Error(ErrorCode::InvalidArgument, "Perron iteration needs an irreducible matrix");
      double r = w[i] / v[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      top = std::max(top, w[i]);
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double nw = w[i] / top;
      change = std::max(change, std::fabs(nw - v[i]));
      v[i] = nw;
    }
    if (hi - lo <= rel_tol * hi && change <= vec_tol) {
      res.root = {0.5 * (lo + hi) - 1.0, lo - 1.0, hi - 1.0, it, false};
      res.vector = std::move(v);
      return res;
    }
    prev_lo = lo;
    prev_hi = hi;
  }
  std::ostringstream os;
  os.precision(17);
  os << "power iteration did not converge after " << kPerronMaxIter << " iterations; last quotients "
     << prev_lo - 1.0 << " and " << prev_hi - 1.0;
  throw Error(ErrorCode::NonConvergence, os.str());
}

long double eval_poly(const std::vector<long long>& c, long double x) {
  long double acc = 0.0L;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + static_cast<long double>(c[i]);
  return acc;
}

}  // namespace

PerronRoot perron_root(const Adjacency& adj) {
  PerronRoot root = power_iterate(adj, kPerronRelTol, HUGE_VAL).root;
  if (adj.size() <= 4 && root.lower != root.upper) {
    auto c = characteristic_polynomial(adj);
    long double pad = 1e-9L * std::max(1.0L, static_cast<long double>(std::fabs(root.upper)));
    long double a = root.lower - pad, b = root.upper + pad;
    long double pa = eval_poly(c, a), pb = eval_poly(c, b);
    if (pa < 0 && pb > 0) {
      for (int i = 0; i < 200 && a < b; ++i) {
        long double mid = 0.5L * (a + b);
        if (mid <= a || mid >= b) break;
        long double pm = eval_poly(c, mid);
        if (pm == 0) {
          a = b = mid;
          break;
        }
        (pm < 0 ? a : b) = mid;
      }
      root.rho = static_cast<double>(0.5L * (a + b));
      root.polished = true;
    }
  }
  return root;
}

PerronVectors perron_vectors(const Adjacency& adj) {
  PerronVectors out;
  auto right = power_iterate(adj, 1e-14, 1e-14);
  auto left = power_iterate(transpose(adj), 1e-14, 1e-14);
  out.rho = perron_root(adj).rho;
  out.right = std::move(right.vector);
  out.left = std::move(left.vector);
  return out;
}

Adjacency induced(const Adjacency& adj, const std::vector<std::size_t>& vertices) {
  Adjacency out(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t w : adj[vertices[i]]) {
      auto it = std::lower_bound(vertices.begin(), vertices.end(), w);
      if (it != vertices.end() && *it == w) out[i].push_back(static_cast<std::size_t>(it - vertices.begin()));
    }
  }
  return out;
}

Adjacency transpose(const Adjacency& adj) {
  Adjacency out(adj.size());
  for (std::size_t v = 0; v < adj.size(); ++v)
    for (std::size_t w : adj[v]) out[w].push_back(v);
  return out;
}

}  // namespace pmdyn::graph
