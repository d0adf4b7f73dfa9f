#include "tricache/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "tricache/errors.hpp"

namespace tricache {

namespace {

// Edge membership as a dense n x n bit matrix (at most 128 MiB at the guard).
struct Sets {
  VertexId n = 0;
  std::vector<std::set<VertexId>> adj;
  std::vector<std::uint64_t> bits;

  bool has(VertexId a, VertexId b) const {
    const std::uint64_t i = a * n + b;
    return (bits[i >> 6] >> (i & 63)) & 1;
  }
};

Sets build(const EdgeList& el) {
  Sets s;
  s.n = el.n_hint;
  for (const Edge& e : el.edges) s.n = std::max({s.n, e.src + 1, e.dst + 1});
  if (s.n > kOracleMaxVertices) throw CapacityError("oracle: graph too large for brute force");
  s.adj.resize(s.n);
  s.bits.assign((s.n * s.n + 63) / 64, 0);
  auto add = [&](VertexId a, VertexId b) {
    if (a == b) return;
    s.adj[a].insert(b);
    const std::uint64_t i = a * s.n + b;
    s.bits[i >> 6] |= std::uint64_t{1} << (i & 63);
  };
  for (const Edge& e : el.edges) {
    add(e.src, e.dst);
    if (!el.directed) add(e.dst, e.src);
  }
  return s;
}

}  // namespace

OracleResult brute_lcc(const EdgeList& el) {
  const Sets s = build(el);
  OracleResult r;
  r.triangles.assign(s.n, 0);
  r.lcc.assign(s.n, 0.0);
  for (VertexId i = 0; i < s.n; ++i) {
    std::uint64_t t = 0;
    for (VertexId j : s.adj[i])
      for (VertexId k : s.adj[i])
        if (j != k && s.has(j, k)) ++t;
    r.triangles[i] = t;
    const std::uint64_t d = s.adj[i].size();
    r.lcc[i] = d < 2 ? 0.0 : static_cast<double>(t) / (static_cast<double>(d) * static_cast<double>(d - 1));
  }
  if (!el.directed) r.global_triangles = brute_triangles(el);
  return r;
}

std::uint64_t brute_triangles(const EdgeList& el) {
  if (el.directed) throw std::invalid_argument("brute_triangles: undirected input only");
  const Sets s = build(el);
  std::uint64_t count = 0;
  for (VertexId i = 0; i < s.n; ++i)
    for (auto j = s.adj[i].upper_bound(i); j != s.adj[i].end(); ++j)
      for (auto k = std::next(j); k != s.adj[i].end(); ++k)
        if (s.has(*j, *k)) ++count;
  return count;
}

}  // namespace tricache
