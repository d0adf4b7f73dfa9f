#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tricache {

using VertexId = std::uint64_t;
using EdgeIndex = std::uint64_t;

inline constexpr VertexId kNoVertex = ~VertexId{0};

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeList {
  bool directed = false;
  VertexId n_hint = 0;  // 1 + largest id seen
  std::vector<Edge> edges;
};

/// Compressed sparse row graph with sorted, duplicate-free adjacency slices.
///
/// Undirected graphs store both directions of every edge, so `m()` counts
/// each undirected edge twice.
class CsrGraph {
 public:
  CsrGraph() : offsets_{0} {}
  CsrGraph(bool directed, std::vector<EdgeIndex> offsets, std::vector<VertexId> adjacencies);

  bool directed() const noexcept { return directed_; }
  VertexId n() const noexcept { return offsets_.size() - 1; }
  EdgeIndex m() const noexcept { return adjacencies_.size(); }

  /// Out-degree; throws std::out_of_range for v >= n.
  EdgeIndex degree(VertexId v) const;
  std::span<const VertexId> adjacency(VertexId v) const;

  std::span<const EdgeIndex> offsets() const noexcept { return offsets_; }
  std::span<const VertexId> adjacencies() const noexcept { return adjacencies_; }

  /// Size of the two CSR arrays in bytes.
  std::uint64_t bytes() const noexcept { return 8 * (offsets_.size() + adjacencies_.size()); }

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;

 private:
  bool directed_ = false;
  std::vector<EdgeIndex> offsets_;
  std::vector<VertexId> adjacencies_;
};

/// Lists broken CsrGraph invariants, e.g. "offsets non-monotone @2".
/// Empty iff the graph is well formed.
std::vector<std::string> validate(const CsrGraph& g);

/// Original-id <-> dense-id mapping produced by preprocessing.
class RelabelMap {
 public:
  RelabelMap() = default;
  RelabelMap(std::vector<VertexId> original_ids, std::vector<VertexId> forward);

  /// Dense id for an input id, or kNoVertex if it was removed or never seen.
  VertexId forward(VertexId original) const;
  /// Input id of a dense vertex.
  VertexId inverse(VertexId dense) const { return inverse_.at(dense); }

  bool removed(VertexId original) const;
  std::vector<VertexId> removed_ids() const;

  /// Every id that appeared in the input, ascending.
  std::span<const VertexId> original_ids() const noexcept { return original_ids_; }
  VertexId dense_count() const noexcept { return inverse_.size(); }

 private:
  std::vector<VertexId> original_ids_;  // sorted, unique
  std::vector<VertexId> forward_;       // parallel to original_ids_
  std::vector<VertexId> inverse_;
};

struct PreprocessOptions {
  std::uint64_t seed = 0;
  bool relabel = true;
  /// Repeat degree<2 removal until no vertex qualifies.
  bool fixpoint = false;
};

struct Preprocessed {
  CsrGraph graph;
  RelabelMap relabel;
};

/// Parses "u v" lines; '#' lines are comments.
EdgeList parse_edge_list(std::istream& in, bool directed);
EdgeList parse_edge_list(const std::string& text, bool directed);

/// Drops loops and duplicates, removes vertices of degree < 2 (and any vertex
/// left isolated), relabels survivors densely and builds the CSR.
Preprocessed preprocess(const EdgeList& el, const PreprocessOptions& opts = {});

/// One edge per stored CSR entry, in CSR order.
EdgeList to_edge_list(const CsrGraph& g);

/// Builds a CSR from an already clean edge list (no loops, no duplicates,
/// both directions present for undirected graphs). Sorts adjacency slices.
CsrGraph csr_from_clean_edges(bool directed, VertexId n, std::vector<Edge> edges);

/// Seeded uniform permutation of [0, n).
std::vector<VertexId> random_permutation(VertexId n, std::uint64_t seed);

/// Graph with vertex v renamed to perm[v].
CsrGraph permute(const CsrGraph& g, std::span<const VertexId> perm);

}  // namespace tricache
