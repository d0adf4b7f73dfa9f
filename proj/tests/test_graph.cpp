#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tricache/errors.hpp"
#include "tricache/graph.hpp"
#include "tricache/graph_io.hpp"
#include "tricache/oracle.hpp"
#include "tricache/rmat.hpp"

using namespace tricache;

namespace {

EdgeList undirected(std::vector<Edge> edges) {
  EdgeList el;
  el.edges = std::move(edges);
  for (const Edge& e : el.edges) el.n_hint = std::max({el.n_hint, e.src + 1, e.dst + 1});
  return el;
}

PreprocessOptions identity() {
  PreprocessOptions o;
  o.relabel = false;
  return o;
}

}  // namespace

TEST(ParseEdgeList, TranscribesPairs) {
  const EdgeList el = parse_edge_list("0 1\n1 2\n", true);
  EXPECT_TRUE(el.directed);
  EXPECT_EQ(el.edges, (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(el.n_hint, 3u);
}

TEST(ParseEdgeList, SkipsComments) {
  const EdgeList el = parse_edge_list("# c\n0 1\n", false);
  EXPECT_EQ(el.edges, (std::vector<Edge>{{0, 1}}));
}

TEST(ParseEdgeList, MalformedTokenReportsLine) {
  try {
    parse_edge_list("0 x\n", false);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(ParseEdgeList, RejectsNegativeAndWrongArity) {
  EXPECT_THROW(parse_edge_list("0 1\n-1 2\n", false), ParseError);
  try {
    parse_edge_list("0 1\n# x\n3\n", false);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_edge_list("1 2 3\n", false), ParseError);
}

TEST(ParseEdgeList, BlankLinesAndTabs) {
  const EdgeList el = parse_edge_list("\n0\t5\n\n  2   3  \n", false);
  EXPECT_EQ(el.edges, (std::vector<Edge>{{0, 5}, {2, 3}}));
  EXPECT_EQ(el.n_hint, 6u);
}

TEST(Preprocess, TriangleKeepsAllVertices) {
  const auto pp = preprocess(undirected({{0, 1}, {1, 2}, {0, 2}}), {});
  EXPECT_EQ(pp.graph.n(), 3u);
  EXPECT_EQ(pp.graph.m(), 6u);
  for (VertexId v = 0; v < 3; ++v) EXPECT_EQ(pp.graph.adjacency(v).size(), 2u);
  EXPECT_TRUE(validate(pp.graph).empty());
}

TEST(Preprocess, PathSinglePassLeavesEmptyGraph) {
  const auto pp = preprocess(undirected({{0, 1}, {1, 2}}), {});
  EXPECT_EQ(pp.graph.n(), 0u);
  EXPECT_EQ(pp.graph.m(), 0u);
  EXPECT_EQ(pp.relabel.removed_ids(), (std::vector<VertexId>{0, 1, 2}));
}

TEST(Preprocess, StarBecomesEmpty) {
  const auto pp = preprocess(undirected({{0, 1}, {0, 2}, {0, 3}}), {});
  EXPECT_EQ(pp.graph.n(), 0u);
  EXPECT_TRUE(pp.relabel.removed(0));
  EXPECT_EQ(pp.relabel.forward(0), kNoVertex);
}

TEST(Preprocess, EmptyInputIsEmptyGraph) {
  const auto pp = preprocess(EdgeList{}, {});
  EXPECT_EQ(pp.graph.n(), 0u);
  EXPECT_TRUE(validate(pp.graph).empty());
}

TEST(Preprocess, DropsLoopsAndDuplicates) {
  const auto pp = preprocess(undirected({{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 0}, {0, 2}, {2, 2}}), identity());
  EXPECT_EQ(pp.graph.n(), 3u);
  EXPECT_EQ(pp.graph.m(), 6u);
}

TEST(Preprocess, SinglePassVersusFixpoint) {
  // Triangle with a two-edge tail: one pass strips the tip only.
  const EdgeList el = undirected({{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}});
  const auto once = preprocess(el, identity());
  EXPECT_EQ(once.graph.n(), 4u);
  PreprocessOptions fix = identity();
  fix.fixpoint = true;
  const auto core = preprocess(el, fix);
  EXPECT_EQ(core.graph.n(), 3u);
  EXPECT_EQ(brute_triangles(to_edge_list(once.graph)), brute_triangles(to_edge_list(core.graph)));
}

TEST(Preprocess, DirectedUsesTotalDegree) {
  EdgeList el;
  el.directed = true;
  el.edges = {{0, 1}, {1, 2}, {2, 0}, {3, 0}};
  const auto pp = preprocess(el, identity());
  EXPECT_EQ(pp.graph.n(), 3u);
  EXPECT_TRUE(pp.graph.directed());
  EXPECT_EQ(pp.graph.m(), 3u);
  EXPECT_TRUE(pp.relabel.removed(3));
}

TEST(Preprocess, LargeSparseIdsCompact) {
  const VertexId big = VertexId{1} << 50;
  const auto pp = preprocess(undirected({{big, big + 7}, {big + 7, 5}, {5, big}}), identity());
  EXPECT_EQ(pp.graph.n(), 3u);
  EXPECT_EQ(pp.relabel.inverse(0), 5u);
  EXPECT_EQ(pp.relabel.forward(big + 7), 2u);
}

TEST(Preprocess, RelabelIsSeededPermutation) {
  RmatParams rp;
  rp.scale = 9;
  rp.edge_factor = 8;
  const EdgeList el = generate_rmat(rp);
  PreprocessOptions a, b, c;
  a.seed = b.seed = 11;
  c.seed = 12;
  const auto pa = preprocess(el, a), pb = preprocess(el, b), pc = preprocess(el, c);
  EXPECT_EQ(pa.graph, pb.graph);
  EXPECT_NE(pa.graph, pc.graph);
  EXPECT_EQ(pa.graph.n(), pc.graph.n());
  std::vector<VertexId> seen;
  for (VertexId id : pa.relabel.original_ids())
    if (pa.relabel.forward(id) != kNoVertex) seen.push_back(pa.relabel.forward(id));
  std::sort(seen.begin(), seen.end());
  std::vector<VertexId> dense(pa.graph.n());
  std::iota(dense.begin(), dense.end(), VertexId{0});
  EXPECT_EQ(seen, dense);
}

TEST(Preprocess, RelabelNeutrality) {
  RmatParams rp;
  rp.scale = 8;
  rp.edge_factor = 8;
  const EdgeList el = generate_rmat(rp);
  const auto id = preprocess(el, identity());
  PreprocessOptions r;
  r.seed = 99;
  const auto rl = preprocess(el, r);
  const auto ti = brute_lcc(to_edge_list(id.graph)).triangles;
  const auto tr = brute_lcc(to_edge_list(rl.graph)).triangles;
  for (VertexId v = 0; v < id.graph.n(); ++v) {
    const VertexId orig = id.relabel.inverse(v);
    EXPECT_EQ(ti[v], tr[rl.relabel.forward(orig)]);
  }
}

TEST(Preprocess, CleaningPreservesTriangles) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RmatParams rp;
    rp.scale = 7;
    rp.edge_factor = 4;
    rp.seed = seed;
    const EdgeList raw = generate_rmat(rp);
    EXPECT_EQ(brute_triangles(raw), brute_triangles(to_edge_list(preprocess(raw, {}).graph)));
  }
}

TEST(Preprocess, RoundTripWithFixpoint) {
  RmatParams rp;
  rp.scale = 9;
  rp.edge_factor = 6;
  PreprocessOptions fix = identity();
  fix.fixpoint = true;
  const auto once = preprocess(generate_rmat(rp), fix);
  const auto twice = preprocess(to_edge_list(once.graph), fix);
  EXPECT_EQ(once.graph, twice.graph);
}

TEST(Csr, DegreeAndAdjacency) {
  const CsrGraph g(true, {0, 2, 4, 5}, {1, 2, 0, 2, 4});
  EXPECT_EQ(g.degree(1), 2u);
  const auto a0 = g.adjacency(0);
  EXPECT_EQ(std::vector<VertexId>(a0.begin(), a0.end()), (std::vector<VertexId>{1, 2}));
  EXPECT_EQ(g.adjacency(2).size(), 1u);
  EXPECT_EQ(g.adjacency(2).data() + 1, g.adjacencies().data() + g.m());
  EXPECT_THROW(g.degree(3), std::out_of_range);
  EXPECT_THROW(g.adjacency(3), std::out_of_range);
  EXPECT_THROW(CsrGraph(false, {}, {}), std::invalid_argument);
}

TEST(Csr, DegreeZeroSlice) {
  const CsrGraph g(true, {0, 0, 1}, {0});
  EXPECT_TRUE(g.adjacency(0).empty());
}

TEST(Csr, DegreesSumToM) {
  RmatParams rp;
  rp.scale = 10;
  const CsrGraph g = preprocess(generate_rmat(rp), {}).graph;
  std::uint64_t sum = 0;
  for (VertexId v = 0; v < g.n(); ++v) sum += g.degree(v);
  EXPECT_EQ(sum, g.m());
  EXPECT_TRUE(validate(g).empty());
}

TEST(Validate, ReportsViolations) {
  EXPECT_TRUE(validate(CsrGraph(false, {0, 2, 4, 6}, {1, 2, 0, 2, 0, 1})).empty());
  const auto non_mono = validate(CsrGraph(true, {0, 2, 1, 3}, {1, 2, 0}));
  ASSERT_FALSE(non_mono.empty());
  EXPECT_EQ(non_mono.front(), "offsets non-monotone @2");
  const auto unsorted = validate(CsrGraph(true, {0, 2, 2, 2}, {2, 1}));
  ASSERT_EQ(unsorted.size(), 1u);
  EXPECT_EQ(unsorted.front(), "slice unsorted @0");
  const auto asym = validate(CsrGraph(false, {0, 1, 1}, {1}));
  ASSERT_FALSE(asym.empty());
  EXPECT_EQ(asym.front().rfind("asymmetric edge", 0), 0u);
  EXPECT_FALSE(validate(CsrGraph(true, {0, 1}, {5})).empty());
}

TEST(Permute, PreservesStructure) {
  RmatParams rp;
  rp.scale = 8;
  const CsrGraph g = preprocess(generate_rmat(rp), {}).graph;
  const auto perm = random_permutation(g.n(), 3);
  const CsrGraph h = permute(g, perm);
  EXPECT_TRUE(validate(h).empty());
  EXPECT_EQ(h.m(), g.m());
  for (VertexId v = 0; v < g.n(); ++v) EXPECT_EQ(h.degree(perm[v]), g.degree(v));
  EXPECT_EQ(brute_triangles(to_edge_list(g)), brute_triangles(to_edge_list(h)));
  std::vector<VertexId> bad(g.n(), 0);
  EXPECT_THROW(permute(g, bad), std::invalid_argument);
}

TEST(GraphIo, CsrRoundTrip) {
  RmatParams rp;
  rp.scale = 8;
  const CsrGraph g = preprocess(generate_rmat(rp), {}).graph;
  std::stringstream ss;
  write_csr(ss, g);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.substr(0, 4), "CSR1");
  EXPECT_EQ(bytes.size(), 4 + 1 + 16 + 8 * (g.n() + 1 + g.m()));
  EXPECT_EQ(static_cast<unsigned char>(bytes[5]), g.n() & 0xff);  // little-endian n
  EXPECT_EQ(read_csr(ss), g);
}

TEST(GraphIo, RejectsBadCsr) {
  std::stringstream bad_magic("CSR2xxxxxxxxxxxxxxxxx");
  EXPECT_THROW(read_csr(bad_magic), FormatError);
  std::stringstream out;
  write_csr(out, CsrGraph(false, {0, 1, 2}, {1, 0}));
  std::string s = out.str();
  s.resize(s.size() - 3);
  std::stringstream truncated(s);
  EXPECT_THROW(read_csr(truncated), FormatError);
}

TEST(GraphIo, EdgeListRoundTrip) {
  const EdgeList el = undirected({{3, 4}, {4, 5}, {5, 3}});
  std::stringstream ss;
  write_edge_list(ss, el);
  EXPECT_EQ(parse_edge_list(ss, false).edges, el.edges);
}
