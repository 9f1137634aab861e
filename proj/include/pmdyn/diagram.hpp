#pragma once

#include "pmdyn/graph.hpp"
#include "pmdyn/symbolic.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pmdyn {

/// A vertex of the Markov diagram realised as a closed subinterval of cl(I_symbol).
struct Vertex {
  Symbol symbol = 1;
  Interval interval;
  std::size_t level = 0;  // first D_n containing the vertex
};

/// Depth-truncated Hofbauer Markov diagram. Vertex ids follow breadth-first
/// discovery order; the k roots cl(I_1)..cl(I_k) come first.
class MarkovDiagram {
public:
  MarkovDiagram(int k, std::size_t depth, NumericPolicy policy) : k_(k), depth_(depth), policy_(policy) {}

  int k() const { return k_; }
  std::size_t depth() const { return depth_; }
  bool saturated() const { return saturated_; }
  const NumericPolicy& policy() const { return policy_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(std::size_t id) const { return vertices_.at(id); }
  const graph::Adjacency& arrows() const { return arrows_; }
  std::size_t size() const { return vertices_.size(); }
  std::size_t arrow_count() const;
  bool has_arrow(std::size_t from, std::size_t to) const;
  std::vector<std::size_t> roots() const;

  /// Id of the vertex (symbol, interval) if present.
  std::optional<std::size_t> find(Symbol symbol, const Interval& interval) const;

private:
  friend std::shared_ptr<const MarkovDiagram> build_diagram(const PiecewiseMonotonicMap&, std::size_t);

  int k_;
  std::size_t depth_;
  NumericPolicy policy_;
  bool saturated_ = false;
  std::vector<Vertex> vertices_;
  graph::Adjacency arrows_;
};

/// Finite vertex subset of a diagram with its adjacency submatrix.
class SubDiagram {
public:
  SubDiagram(std::shared_ptr<const MarkovDiagram> parent, std::vector<std::size_t> vertex_set);

  const MarkovDiagram& parent() const { return *parent_; }
  const std::shared_ptr<const MarkovDiagram>& parent_ptr() const { return parent_; }
  /// Parent vertex ids, ascending.
  const std::vector<std::size_t>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  /// Adjacency in local indices 0..size()-1.
  const graph::Adjacency& local_arrows() const { return local_; }
  bool entry(std::size_t i, std::size_t j) const;  // submatrix M(F)_{ij}, local indices
  std::optional<std::size_t> local_index(std::size_t parent_id) const;
  Symbol symbol(std::size_t local) const { return parent_->vertex(vertices_[local]).symbol; }
  bool contains(std::size_t parent_id) const { return local_index(parent_id).has_value(); }
  bool strongly_connected() const;

private:
  std::shared_ptr<const MarkovDiagram> parent_;
  std::vector<std::size_t> vertices_;
  graph::Adjacency local_;
};

/// Builds D_0 .. D_depth with the interval successor rule. Arrows from
/// level-`depth` vertices are kept only when the successor already exists, so
/// the result is the induced subdiagram on the discovered vertices.
/// `saturated` is set when the vertex set is closed under successors.
std::shared_ptr<const MarkovDiagram> build_diagram(const PiecewiseMonotonicMap& map, std::size_t depth);

/// Subdiagram of all vertices with level <= max_level; equals the vertex set
/// of build_diagram(map, max_level).
SubDiagram level_truncation(const std::shared_ptr<const MarkovDiagram>& d, std::size_t max_level);
SubDiagram whole(const std::shared_ptr<const MarkovDiagram>& d);

/// Cyclic strongly connected component with the largest spectral radius; ties
/// go to the smaller component, then to the smaller first vertex id.
/// Throws NoCycle.
SubDiagram irreducible_core(const std::shared_ptr<const MarkovDiagram>& d);
SubDiagram irreducible_core(const SubDiagram& s);

/// Strongly connected components of s (as subdiagrams), ordered by first vertex.
std::vector<SubDiagram> components(const SubDiagram& s);

/// Largest Perron root over the cyclic components of s (0 if acyclic).
graph::PerronRoot spectral_radius(const SubDiagram& s);
/// log of the spectral radius, natural log; 0 for acyclic subdiagrams.
double spectral_radius_entropy(const SubDiagram& s);

struct SpecificationCertificate {
  std::size_t gap = 0;           // max over pairs of shortest path length - 1
  std::size_t gap_positive = 0;  // same bound when connectors must be nonempty
  std::size_t test_len = 0;
  std::uint64_t words_checked = 0;
  std::uint64_t pairs_checked = 0;
  std::size_t worst_connector = 0;           // largest minimal connector found
  std::size_t worst_connector_positive = 0;  // same, connectors of length >= 1
  bool verified = false;
};

/// Connector bound of a strongly connected subdiagram, certified by exhausting
/// all word pairs of length <= test_len in its projected language.
/// Throws NotStronglyConnected.
SpecificationCertificate specification_gap(const SubDiagram& s, std::size_t test_len);

/// Symbols of a vertex path. Throws BrokenPath with the position of the first
/// missing arrow.
Word project_path(const MarkovDiagram& d, const std::vector<std::size_t>& path);

/// Projected-language helpers on a subdiagram (vertex sets as local indices).
class ProjectedLanguage {
public:
  explicit ProjectedLanguage(const SubDiagram& s);

  /// Local vertices where some path projecting to w can end (empty if w is
  /// not in the language).
  std::vector<bool> end_set(const Word& w) const;
  /// Local vertices where some path projecting to w can start.
  std::vector<bool> start_set(const Word& w) const;
  bool contains(const Word& w) const;
  /// Shortest connector z (lexicographically least among shortest) with
  /// u z v in the language; nullopt when none exists up to max_len.
  std::optional<Word> connector(const Word& u, const Word& v, std::size_t max_len) const;

private:
  SubDiagram sub_;
  graph::Adjacency reverse_;
};

std::string to_dot(const MarkovDiagram& d);
std::string vertex_csv(const MarkovDiagram& d);
std::string edge_csv(const MarkovDiagram& d);

}  // namespace pmdyn
