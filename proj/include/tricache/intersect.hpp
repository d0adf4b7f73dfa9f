#pragma once

#include <cstdint>
#include <span>

#include "tricache/graph.hpp"
#include "tricache/worker_pool.hpp"

namespace tricache {

using Slice = std::span<const VertexId>;

enum class Method { BinarySearch, SSI };

/// Two-pointer sorted set intersection size.
std::uint64_t ssi_count(Slice a, Slice b);

/// One binary search in `tree` per element of `keys`. Pass the shorter list
/// as keys.
std::uint64_t binary_count(Slice keys, Slice tree);

/// SSI iff len_long <= len_short * (floor(log2(len_long)) - 1), evaluated in
/// integers; ties and degenerate lengths go to binary search. Arguments may
/// be given in either order.
Method choose_method(std::uint64_t len_short, std::uint64_t len_long);

/// Intersection size with the method picked by choose_method().
std::uint64_t hybrid_count(Slice a, Slice b);

/// |{x in a ∩ b : x > floor}|.
std::uint64_t count_above(Slice a, Slice b, VertexId floor);

inline constexpr std::size_t kDefaultCutoff = 4096;

struct ParallelTrace {
  bool sequential = true;
  Method method = Method::BinarySearch;
  std::size_t chunks = 1;
};

/// Same value as hybrid_count(). Below `cutoff` combined elements, or with a
/// single worker, runs sequentially. Binary-search mode splits the shorter
/// (keys) list evenly; SSI mode splits the longer list and each chunk finds
/// its start in the shorter list by binary search.
std::uint64_t parallel_count(Slice a, Slice b, WorkerPool& pool, std::size_t cutoff = kDefaultCutoff,
                             ParallelTrace* trace = nullptr);

}  // namespace tricache
