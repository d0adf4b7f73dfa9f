#include <gtest/gtest.h>

#include "tricache/engine.hpp"
#include "tricache/errors.hpp"
#include "tricache/intersect.hpp"
#include "tricache/oracle.hpp"
#include "tricache/random.hpp"

using namespace tricache;

namespace {

EdgeList edges(std::initializer_list<Edge> e, bool directed = false) {
  EdgeList el;
  el.directed = directed;
  el.edges = e;
  return el;
}

EdgeList complete(VertexId n) {
  EdgeList el;
  for (VertexId i = 0; i < n; ++i)
    for (VertexId j = i + 1; j < n; ++j) el.edges.push_back({i, j});
  return el;
}

EdgeList gnp(VertexId n, double p, std::uint64_t seed) {
  Rng rng(seed);
  EdgeList el;
  el.n_hint = n;
  for (VertexId i = 0; i < n; ++i)
    for (VertexId j = i + 1; j < n; ++j)
      if (uniform01(rng) < p) el.edges.push_back({i, j});
  return el;
}

}  // namespace

TEST(Oracle, SmallGraphs) {
  const auto k3 = brute_lcc(edges({{0, 1}, {1, 2}, {2, 0}}));
  EXPECT_EQ(k3.lcc, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(k3.global_triangles, 1u);
  const auto c5 = brute_lcc(edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}));
  EXPECT_EQ(c5.lcc, std::vector<double>(5, 0.0));
  EXPECT_EQ(brute_triangles(complete(4)), 4u);
  EXPECT_EQ(brute_triangles(complete(5)), 10u);
  EXPECT_EQ(brute_lcc(complete(5)).global_triangles, 10u);
}

TEST(Oracle, LoopsAndDuplicates) {
  const auto r = brute_lcc(edges({{0, 1}, {1, 0}, {1, 2}, {2, 0}, {2, 2}, {0, 1}}));
  EXPECT_EQ(r.lcc, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(r.triangles, (std::vector<std::uint64_t>{2, 2, 2}));
}

TEST(Oracle, Directed) {
  // a directed 3-cycle: no out-neighbour pair of any vertex is an edge
  const auto cyc = brute_lcc(edges({{0, 1}, {1, 2}, {2, 0}}, true));
  EXPECT_EQ(cyc.lcc, std::vector<double>(3, 0.0));
  const auto ff = brute_lcc(edges({{0, 1}, {0, 2}, {1, 2}}, true));
  EXPECT_DOUBLE_EQ(ff.lcc[0], 0.5);
  EXPECT_THROW(brute_triangles(edges({{0, 1}}, true)), std::invalid_argument);
}

TEST(Oracle, IsolatedAndHint) {
  EdgeList el = edges({{0, 1}});
  el.n_hint = 4;
  const auto r = brute_lcc(el);
  EXPECT_EQ(r.lcc.size(), 4u);
  EXPECT_EQ(r.global_triangles, 0u);
}

TEST(Oracle, MatchesEngineOnGnp) {
  const auto g = preprocess(gnp(64, 0.2, 3), {}).graph;
  const auto el = to_edge_list(g);
  RunConfig cfg;
  cfg.p = 3;
  EXPECT_EQ(run_global_tc(g, cfg).result.global_triangles, brute_triangles(el));
  EXPECT_EQ(run(g, cfg).result.triangles, brute_lcc(el).triangles);
}

TEST(Oracle, CountAboveIdentity) {
  const auto g = preprocess(gnp(80, 0.15, 8), {}).graph;
  std::uint64_t raw = 0;
  for (VertexId u = 0; u < g.n(); ++u)
    for (VertexId v : g.adjacency(u)) raw += count_above(g.adjacency(u), g.adjacency(v), v);
  EXPECT_EQ(raw, 3 * brute_triangles(to_edge_list(g)));
}

TEST(Oracle, PermutationInvariant) {
  const auto g = preprocess(gnp(50, 0.2, 21), {}).graph;
  const auto perm = random_permutation(g.n(), 5);
  const auto a = brute_lcc(to_edge_list(g)), b = brute_lcc(to_edge_list(permute(g, perm)));
  EXPECT_EQ(a.global_triangles, b.global_triangles);
  for (VertexId v = 0; v < g.n(); ++v) EXPECT_DOUBLE_EQ(a.lcc[v], b.lcc[perm[v]]);
}

TEST(Oracle, SizeGuard) {
  EXPECT_THROW(brute_lcc(edges({{0, kOracleMaxVertices}})), CapacityError);
  EXPECT_THROW(brute_triangles(edges({{0, kOracleMaxVertices}})), CapacityError);
  EXPECT_NO_THROW(brute_lcc(edges({{0, kOracleMaxVertices - 1}})));
}
