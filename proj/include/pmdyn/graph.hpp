#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace pmdyn::graph {

/// Adjacency lists over vertices 0..n-1.
using Adjacency = std::vector<std::vector<std::size_t>>;

/// Strongly connected components, each sorted ascending, ordered by their
/// smallest vertex.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& adj);

/// True iff the component carries a cycle (more than one vertex or a self-loop).
bool is_cyclic(const Adjacency& adj, const std::vector<std::size_t>& component);

/// BFS distances from `source` (0 at the source); nullopt when unreachable.
std::vector<std::optional<std::size_t>> bfs_distances(const Adjacency& adj, std::size_t source);

/// Shortest vertex path from `from` to `to` (inclusive, at least one arrow when
/// from == to). Ties broken by smallest vertex index.
std::optional<std::vector<std::size_t>> shortest_path(const Adjacency& adj, std::size_t from, std::size_t to);

struct PerronRoot {
  double rho = 0.0;
  double lower = 0.0;  // Collatz-Wielandt bounds at termination
  double upper = 0.0;
  std::size_t iterations = 0;
  bool polished = false;  // refined on the characteristic polynomial
};

inline constexpr double kPerronRelTol = 1e-12;
inline constexpr std::size_t kPerronMaxIter = 100000;

/// Perron root of an irreducible 0/1 matrix given as adjacency lists.
/// Power iteration on A + I with Collatz-Wielandt stopping; matrices of order
/// at most 4 are polished on their integer characteristic polynomial.
/// Throws NonConvergence.
PerronRoot perron_root(const Adjacency& adj);

/// Right and left Perron vectors (positive, max-normalised) of an irreducible
/// 0/1 matrix.
struct PerronVectors {
  double rho = 0.0;
  std::vector<double> right;
  std::vector<double> left;
};
PerronVectors perron_vectors(const Adjacency& adj);

/// Integer characteristic polynomial coefficients c_0..c_n of det(xI - A),
/// c_n = 1, via Faddeev-LeVerrier.
std::vector<long long> characteristic_polynomial(const Adjacency& adj);

/// Restriction of adj to `vertices` (sorted), reindexed 0..m-1.
Adjacency induced(const Adjacency& adj, const std::vector<std::size_t>& vertices);

/// Reverse adjacency.
Adjacency transpose(const Adjacency& adj);

}  // namespace pmdyn::graph
