#pragma once

// Brute-force references. They use edge-set membership only, on purpose.

#include <cstdint>
#include <vector>

#include "tricache/graph.hpp"

namespace tricache {

inline constexpr VertexId kOracleMaxVertices = VertexId{1} << 15;

struct OracleResult {
  std::vector<std::uint64_t> triangles;  // ordered neighbour pairs that are edges
  std::vector<double> lcc;
  std::uint64_t global_triangles = 0;    // undirected input only
};

/// Vertices are the ids 0..n-1 with n = max(el.n_hint, 1 + largest id).
/// Throws CapacityError above kOracleMaxVertices.
OracleResult brute_lcc(const EdgeList& el);

/// Vertex triples with all three edges present. Undirected input only.
std::uint64_t brute_triangles(const EdgeList& el);

}  // namespace tricache
