#include <gtest/gtest.h>

#include <set>
#include <unordered_set>

#include "tricache/intersect.hpp"
#include "tricache/random.hpp"

using namespace tricache;

namespace {

using Vec = std::vector<VertexId>;

Vec random_sorted(Rng& rng, std::size_t len, VertexId universe) {
  std::set<VertexId> s;
  while (s.size() < len) s.insert(uniform_below(rng, universe));
  return {s.begin(), s.end()};
}

std::uint64_t oracle(const Vec& a, const Vec& b) {
  const std::unordered_set<VertexId> h(a.begin(), a.end());
  std::uint64_t c = 0;
  for (VertexId x : b) c += h.count(x);
  return c;
}

}  // namespace

TEST(Ssi, Examples) {
  EXPECT_EQ(ssi_count(Vec{2, 4, 6}, Vec{1, 2, 3, 4, 5}), 2u);
  EXPECT_EQ(ssi_count(Vec{}, Vec{1, 2}), 0u);
  EXPECT_EQ(ssi_count(Vec{1, 5, 9}, Vec{1, 5, 9}), 3u);
}

TEST(Binary, Examples) {
  EXPECT_EQ(binary_count(Vec{2, 4, 6}, Vec{1, 2, 3, 4, 5}), 2u);
  EXPECT_EQ(binary_count(Vec{0}, Vec{}), 0u);
  EXPECT_EQ(binary_count(Vec{7}, Vec{1, 2, 3, 4, 5, 6}), 0u);
  EXPECT_EQ(binary_count(Vec{1, 6}, Vec{1, 2, 3, 4, 5, 6}), 2u);  // both boundaries
}

TEST(ChooseMethod, Examples) {
  EXPECT_EQ(choose_method(32, 64), Method::SSI);
  EXPECT_EQ(choose_method(2, 64), Method::BinarySearch);
  EXPECT_EQ(choose_method(1, 1), Method::BinarySearch);
  EXPECT_EQ(choose_method(64, 32), Method::SSI);
  EXPECT_EQ(choose_method(0, 0), Method::BinarySearch);
  EXPECT_EQ(choose_method(2, 2), Method::BinarySearch);  // log factor 0
  EXPECT_EQ(choose_method(12, 24), Method::SSI);          // 24 <= 12 * 3
  EXPECT_EQ(choose_method(7, 24), Method::BinarySearch);  // 24 > 7 * 3
  EXPECT_EQ(choose_method(8, 24), Method::SSI);           // 24 <= 8 * 3, exact equality
}

TEST(ChooseMethod, HugeLengthsNoOverflow) {
  const std::uint64_t big = std::uint64_t{1} << 62;
  EXPECT_EQ(choose_method(big, big), Method::SSI);
  EXPECT_EQ(choose_method(1, big), Method::BinarySearch);
}

TEST(Hybrid, Examples) {
  EXPECT_EQ(hybrid_count(Vec{1}, Vec{1}), 1u);
  EXPECT_EQ(hybrid_count(Vec{}, Vec{}), 0u);
}

TEST(CountAbove, Examples) {
  EXPECT_EQ(count_above(Vec{1, 2, 3}, Vec{2, 3}, 2), 1u);
  EXPECT_EQ(count_above(Vec{1, 2, 3}, Vec{2, 3}, 3), 0u);
  EXPECT_EQ(count_above(Vec{1, 2, 3}, Vec{2, 3}, 100), 0u);
  EXPECT_EQ(count_above(Vec{5, 6, 7}, Vec{5, 7}, 0), hybrid_count(Vec{5, 6, 7}, Vec{5, 7}));
}

TEST(Parallel, SingleWorkerMatchesHybrid) {
  WorkerPool pool(1);
  Rng rng(1);
  const Vec a = random_sorted(rng, 5000, 100000), b = random_sorted(rng, 6000, 100000);
  ParallelTrace t;
  EXPECT_EQ(parallel_count(a, b, pool, 16, &t), hybrid_count(a, b));
  EXPECT_TRUE(t.sequential);
  EXPECT_EQ(t.method, choose_method(a.size(), b.size()));
}

TEST(Parallel, FourWorkersMatchOne) {
  WorkerPool one(1), four(4);
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const Vec a = random_sorted(rng, 40 + uniform_below(rng, 3000), 20000);
    const Vec b = random_sorted(rng, 40 + uniform_below(rng, 3000), 20000);
    ParallelTrace t;
    EXPECT_EQ(parallel_count(a, b, four, 64, &t), parallel_count(a, b, one, 64));
    EXPECT_FALSE(t.sequential);
    EXPECT_GT(t.chunks, 1u);
  }
}

TEST(Parallel, BelowCutoffIsSequential) {
  WorkerPool pool(4);
  const Vec a{1, 2, 3}, b{2, 3, 4};
  ParallelTrace t;
  EXPECT_EQ(parallel_count(a, b, pool, kDefaultCutoff, &t), 2u);
  EXPECT_TRUE(t.sequential);
  EXPECT_EQ(t.chunks, 1u);
}

TEST(Parallel, BothModesChunk) {
  WorkerPool pool(3);
  Rng rng(3);
  const Vec big = random_sorted(rng, 4000, 50000), small = random_sorted(rng, 40, 50000);
  ParallelTrace t;
  EXPECT_EQ(parallel_count(small, big, pool, 16, &t), oracle(small, big));
  EXPECT_EQ(t.method, Method::BinarySearch);
  EXPECT_EQ(t.chunks, 3u);
  const Vec other = random_sorted(rng, 3500, 50000);
  EXPECT_EQ(parallel_count(big, other, pool, 16, &t), oracle(big, other));
  EXPECT_EQ(t.method, Method::SSI);
  EXPECT_FALSE(t.sequential);
}

TEST(Property, AllKernelsAgreeWithHashOracle) {
  Rng rng(2024);
  WorkerPool pool(3);
  for (int c = 0; c < 10000; ++c) {
    const VertexId universe = 1 + uniform_below(rng, c % 3 == 0 ? 64 : 5000);
    const Vec a = random_sorted(rng, uniform_below(rng, std::min<VertexId>(universe, 300) + 1), universe);
    const Vec b = random_sorted(rng, uniform_below(rng, std::min<VertexId>(universe, 300) + 1), universe);
    const auto expect = oracle(a, b);
    const Vec& s = a.size() <= b.size() ? a : b;
    const Vec& l = a.size() <= b.size() ? b : a;
    ASSERT_EQ(ssi_count(a, b), expect);
    ASSERT_EQ(ssi_count(b, a), expect);
    ASSERT_EQ(binary_count(s, l), expect);
    ASSERT_EQ(hybrid_count(a, b), expect);
    ASSERT_EQ(hybrid_count(b, a), expect);
    ASSERT_EQ(parallel_count(a, b, pool, 8), expect);
    ASSERT_EQ(parallel_count(b, a, pool, 8), expect);
    const VertexId floor = uniform_below(rng, universe + 1);
    std::uint64_t above = 0;
    for (VertexId x : a)
      if (x > floor && std::binary_search(b.begin(), b.end(), x)) ++above;
    ASSERT_EQ(count_above(a, b, floor), above);
  }
}

TEST(WorkerPool, RunsEveryIndexOnce) {
  WorkerPool pool(4);
  EXPECT_EQ(pool.size(), 4u);
  for (int round = 0; round < 20; ++round) {
    std::vector<int> hit(100, 0);
    pool.run(hit.size(), [&](std::size_t i) { ++hit[i]; });
    for (int h : hit) ASSERT_EQ(h, 1);
  }
  pool.run(0, [](std::size_t) { FAIL(); });
}
