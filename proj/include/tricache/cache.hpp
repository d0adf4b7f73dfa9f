#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tricache/window.hpp"

namespace tricache {

struct CacheKey {
  NodeId target = 0;
  WindowId window = WindowId::Offsets;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;

  static CacheKey of(const GetRequest& r) { return {r.target, r.window, r.offset, r.length}; }
  friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept;
};

enum class EvictionPolicy { Lru, LruPositional, UserScore };
enum class CacheMode { AlwaysCache };

const char* to_string(EvictionPolicy p);
/// Accepts "lru", "positional", "degree" (alias "score").
EvictionPolicy parse_policy(const std::string& name);

struct CacheConfig {
  std::uint64_t capacity_bytes = 0;
  std::uint64_t table_slots = 1;
  EvictionPolicy policy = EvictionPolicy::Lru;
  CacheMode mode = CacheMode::AlwaysCache;
};

struct CacheStats {
  std::uint64_t gets = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t compulsory_misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t bypasses = 0;
  std::uint64_t bytes_from_cache = 0;
  std::uint64_t bytes_from_network = 0;

  double miss_rate() const noexcept { return gets ? static_cast<double>(misses) / gets : 0.0; }
  CacheStats& operator+=(const CacheStats& o);
};

/// Free regions of the cache buffer, kept coalesced. Indexed both by
/// placement and by (size, placement) for best-fit lookup.
class FreeLedger {
 public:
  explicit FreeLedger(std::uint64_t capacity = 0);

  std::uint64_t capacity() const noexcept { return capacity_; }
  std::uint64_t free_bytes() const noexcept { return free_; }
  std::size_t region_count() const noexcept { return by_offset_.size(); }

  /// Placement of the smallest free region holding `bytes`, if any.
  std::optional<std::uint64_t> best_fit(std::uint64_t bytes) const;
  /// Carves [placement, placement+bytes) out of the free region starting at placement.
  void allocate(std::uint64_t placement, std::uint64_t bytes);
  /// Returns a range to the free set, merging with neighbours.
  void release(std::uint64_t placement, std::uint64_t bytes);
  /// Free bytes immediately before and after [placement, placement+bytes).
  std::uint64_t adjacent_free(std::uint64_t placement, std::uint64_t bytes) const;

  const std::map<std::uint64_t, std::uint64_t>& regions() const noexcept { return by_offset_; }

 private:
  std::uint64_t capacity_;
  std::uint64_t free_;
  std::map<std::uint64_t, std::uint64_t> by_offset_;  // placement -> size
  std::set<std::pair<std::uint64_t, std::uint64_t>> by_size_;
};

enum class InsertResult { Stored, Bypassed };

/// Read cache in front of one window of one node. Entries have variable
/// size and live in a fixed byte buffer; the graph is read-only, so entries
/// persist across epochs. Single owner, not thread-safe.
class RmaCache {
 public:
  static constexpr int kMaxVictims = 64;

  explicit RmaCache(CacheConfig cfg);

  const CacheConfig& config() const noexcept { return cfg_; }

  /// Serves `req` from the cache or through `ep`. On a miss the payload is
  /// offered to insert() with `score_hint` (0 when absent). `cost` receives
  /// the modeled network time (0 on a hit).
  std::vector<std::uint64_t> cached_get(Endpoint& ep, const GetRequest& req,
                                        std::optional<double> score_hint = std::nullopt, double* cost = nullptr);

  /// Stores a payload for a key that is not live. Evicts up to kMaxVictims
  /// entries when the buffer or the index is full; bypasses otherwise.
  InsertResult insert(const CacheKey& key, std::span<const std::uint64_t> payload, double score);

  /// Entry the policy would evict next. Throws InvalidState when empty.
  CacheKey select_victim() const;
  /// Drops a live entry without counting an eviction.
  void erase(const CacheKey& key);

  bool contains(const CacheKey& key) const { return entries_.contains(key); }
  /// Payload of a live entry, without touching recency or statistics.
  std::optional<std::span<const std::uint64_t>> peek(const CacheKey& key) const;
  /// Lookup that counts as an access on hit (recency refresh); no stats.
  std::optional<std::span<const std::uint64_t>> touch(const CacheKey& key);
  std::optional<std::uint64_t> placement(const CacheKey& key) const;

  const CacheStats& stats() const noexcept { return stats_; }
  /// Zeroes the counters; live entries and the first-seen set are kept.
  void reset_stats() { stats_ = {}; }

  std::size_t live_entries() const noexcept { return entries_.size(); }
  std::uint64_t live_bytes() const noexcept { return live_bytes_; }
  const FreeLedger& ledger() const noexcept { return ledger_; }

  /// Empty iff ledger and index agree (disjoint, coalesced, bytes conserved).
  std::vector<std::string> check_invariants() const;

 private:
  struct Entry {
    std::uint64_t placement = 0;
    std::uint64_t bytes = 0;
    double score = 0.0;
    std::uint64_t last_access = 0;
    std::list<CacheKey>::iterator lru;
  };

  void refresh(const CacheKey& key, Entry& e);
  void evict(const CacheKey& key);
  bool fits(std::uint64_t bytes, std::uint64_t* where) const;

  CacheConfig cfg_;
  FreeLedger ledger_;
  std::vector<std::uint64_t> buffer_;
  std::unordered_map<CacheKey, Entry, CacheKeyHash> entries_;
  std::list<CacheKey> recency_;                                   // front = least recent
  std::map<std::pair<double, std::uint64_t>, CacheKey> by_score_; // (score, last_access)
  std::unordered_set<CacheKey, CacheKeyHash> seen_;
  std::uint64_t clock_ = 0;
  std::uint64_t live_bytes_ = 0;
  CacheStats stats_;
};

/// Index size for a cache fronting `which`: min(n, capacity/16) for offsets
/// (one (start, end) pair per vertex); n * r^2 with r = capacity/graph_bytes
/// for adjacency lists. Clamped to [1, max(n,1)].
std::uint64_t suggest_table_slots(std::uint64_t n, std::uint64_t capacity_bytes, std::uint64_t graph_bytes,
                                  WindowId which);

}  // namespace tricache
