#pragma once

#include <cstdint>

#include "tricache/graph.hpp"

namespace tricache {

/// Recursive-matrix generator parameters. Defaults are the skewed social
/// network setting (a=0.57, b=c=0.19, d=0.05).
struct RmatParams {
  unsigned scale = 10;
  std::uint64_t edge_factor = 16;
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
  double d = 0.05;
  std::uint64_t seed = 1;
  bool directed = false;
};

/// Throws std::invalid_argument for bad probabilities/scale/edge factor and
/// CapacityError when edge_factor * 2^scale cannot be materialized.
void check(const RmatParams& p);

/// edge_factor * 2^scale insertions over 2^scale vertices. Loops and
/// duplicates are kept; preprocess() removes them.
EdgeList generate_rmat(const RmatParams& p);

}  // namespace tricache
