#include "tricache/intersect.hpp"

#include <algorithm>
#include <bit>
#include <vector>

namespace tricache {

std::uint64_t ssi_count(Slice a, Slice b) {
  std::uint64_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++count;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return count;
}

std::uint64_t binary_count(Slice keys, Slice tree) {
  std::uint64_t count = 0;
  auto lo = tree.begin();
  for (VertexId x : keys) {
    lo = std::lower_bound(lo, tree.end(), x);
    if (lo == tree.end()) break;
    if (*lo == x) {
      ++count;
      ++lo;
    }
  }
  return count;
}

Method choose_method(std::uint64_t len_short, std::uint64_t len_long) {
  if (len_short > len_long) std::swap(len_short, len_long);
  if (len_long == 0) return Method::BinarySearch;
  const __int128 log2_long = std::bit_width(len_long) - 1;
  const __int128 rhs = static_cast<__int128>(len_short) * (log2_long - 1);
  return static_cast<__int128>(len_long) <= rhs ? Method::SSI : Method::BinarySearch;
}

std::uint64_t hybrid_count(Slice a, Slice b) {
  if (a.size() > b.size()) std::swap(a, b);
  return choose_method(a.size(), b.size()) == Method::SSI ? ssi_count(a, b) : binary_count(a, b);
}

std::uint64_t count_above(Slice a, Slice b, VertexId floor) {
  a = a.subspan(std::upper_bound(a.begin(), a.end(), floor) - a.begin());
  b = b.subspan(std::upper_bound(b.begin(), b.end(), floor) - b.begin());
  return hybrid_count(a, b);
}

std::uint64_t parallel_count(Slice a, Slice b, WorkerPool& pool, std::size_t cutoff, ParallelTrace* trace) {
  if (a.size() > b.size()) std::swap(a, b);
  const Method method = choose_method(a.size(), b.size());
  ParallelTrace local;
  local.method = method;
  const std::size_t workers = pool.size();
  if (workers == 1 || a.size() + b.size() < cutoff || a.empty()) {
    if (trace) *trace = local;
    return method == Method::SSI ? ssi_count(a, b) : binary_count(a, b);
  }

  const Slice split = method == Method::SSI ? b : a;
  const std::size_t chunks = std::min(workers, split.size());
  std::vector<std::uint64_t> partial(chunks, 0);
  pool.run(chunks, [&](std::size_t c) {
    const std::size_t lo = split.size() * c / chunks;
    const std::size_t hi = split.size() * (c + 1) / chunks;
    const Slice part = split.subspan(lo, hi - lo);
    if (method == Method::BinarySearch) {
      partial[c] = binary_count(part, b);
    } else {
      // Elements of `a` that can match this chunk lie in [part.front(), part.back()].
      const auto first = std::lower_bound(a.begin(), a.end(), part.front());
      const auto last = std::upper_bound(first, a.end(), part.back());
      partial[c] = ssi_count(Slice(first, last), part);
    }
  });
  local.sequential = false;
  local.chunks = chunks;
  if (trace) *trace = local;
  std::uint64_t total = 0;
  for (auto p : partial) total += p;
  return total;
}

}  // namespace tricache
