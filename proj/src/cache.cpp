#include "tricache/cache.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "tricache/errors.hpp"
#include "tricache/random.hpp"

namespace tricache {

std::size_t CacheKeyHash::operator()(const CacheKey& k) const noexcept {
  std::uint64_t h = mix64(k.target * 2 + static_cast<std::uint64_t>(k.window));
  h = mix64(h ^ k.offset);
  return mix64(h ^ k.length);
}

const char* to_string(EvictionPolicy p) {
  switch (p) {
    case EvictionPolicy::Lru: return "lru";
    case EvictionPolicy::LruPositional: return "positional";
    case EvictionPolicy::UserScore: return "degree";
  }
  return "?";
}

EvictionPolicy parse_policy(const std::string& name) {
  if (name == "lru") return EvictionPolicy::Lru;
  if (name == "positional") return EvictionPolicy::LruPositional;
  if (name == "degree" || name == "score") return EvictionPolicy::UserScore;
  throw std::invalid_argument("unknown eviction policy '" + name + "'");
}

CacheStats& CacheStats::operator+=(const CacheStats& o) {
  gets += o.gets;
  hits += o.hits;
  misses += o.misses;
  compulsory_misses += o.compulsory_misses;
  evictions += o.evictions;
  bypasses += o.bypasses;
  bytes_from_cache += o.bytes_from_cache;
  bytes_from_network += o.bytes_from_network;
  return *this;
}

// ---------------------------------------------------------------------------

FreeLedger::FreeLedger(std::uint64_t capacity) : capacity_(capacity), free_(capacity) {
  if (capacity > 0) {
    by_offset_.emplace(0, capacity);
    by_size_.emplace(capacity, 0);
  }
}

std::optional<std::uint64_t> FreeLedger::best_fit(std::uint64_t bytes) const {
  auto it = by_size_.lower_bound({bytes, 0});
  if (it == by_size_.end()) return std::nullopt;
  return it->second;
}

void FreeLedger::allocate(std::uint64_t placement, std::uint64_t bytes) {
  auto it = by_offset_.find(placement);
  if (it == by_offset_.end() || it->second < bytes) throw std::logic_error("ledger: allocation outside a free region");
  const std::uint64_t size = it->second;
  by_size_.erase({size, placement});
  by_offset_.erase(it);
  if (size > bytes) {
    by_offset_.emplace(placement + bytes, size - bytes);
    by_size_.emplace(size - bytes, placement + bytes);
  }
  free_ -= bytes;
}

void FreeLedger::release(std::uint64_t placement, std::uint64_t bytes) {
  if (bytes == 0) return;
  std::uint64_t start = placement, size = bytes;
  auto next = by_offset_.lower_bound(placement);
  if (next != by_offset_.begin()) {
    auto prev = std::prev(next);
    if (prev->first + prev->second == placement) {
      start = prev->first;
      size += prev->second;
      by_size_.erase({prev->second, prev->first});
      by_offset_.erase(prev);
    }
  }
  if (next != by_offset_.end() && next->first == placement + bytes) {
    size += next->second;
    by_size_.erase({next->second, next->first});
    by_offset_.erase(next);
  }
  by_offset_.emplace(start, size);
  by_size_.emplace(size, start);
  free_ += bytes;
}

std::uint64_t FreeLedger::adjacent_free(std::uint64_t placement, std::uint64_t bytes) const {
  std::uint64_t total = 0;
  auto next = by_offset_.lower_bound(placement);
  if (next != by_offset_.begin()) {
    auto prev = std::prev(next);
    if (prev->first + prev->second == placement) total += prev->second;
  }
  if (next != by_offset_.end() && next->first == placement + bytes) total += next->second;
  return total;
}

// ---------------------------------------------------------------------------

RmaCache::RmaCache(CacheConfig cfg)
    : cfg_(cfg), ledger_(cfg.capacity_bytes), buffer_((cfg.capacity_bytes + 7) / 8) {
  if (cfg_.table_slots == 0) throw std::invalid_argument("cache: table_slots must be >= 1");
}

void RmaCache::refresh(const CacheKey& key, Entry& e) {
  if (cfg_.policy == EvictionPolicy::UserScore) by_score_.erase({e.score, e.last_access});
  e.last_access = ++clock_;
  recency_.splice(recency_.end(), recency_, e.lru);
  if (cfg_.policy == EvictionPolicy::UserScore) by_score_.emplace(std::make_pair(e.score, e.last_access), key);
}

std::optional<std::span<const std::uint64_t>> RmaCache::peek(const CacheKey& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return std::span<const std::uint64_t>(buffer_).subspan(it->second.placement / 8, it->second.bytes / 8);
}

std::optional<std::span<const std::uint64_t>> RmaCache::touch(const CacheKey& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  refresh(key, it->second);
  return peek(key);
}

std::optional<std::uint64_t> RmaCache::placement(const CacheKey& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.placement;
}

std::vector<std::uint64_t> RmaCache::cached_get(Endpoint& ep, const GetRequest& req,
                                                std::optional<double> score_hint, double* cost) {
  const CacheKey key = CacheKey::of(req);
  ++stats_.gets;
  if (auto hit = touch(key)) {
    ++stats_.hits;
    stats_.bytes_from_cache += req.bytes();
    if (cost) *cost = 0.0;
    return {hit->begin(), hit->end()};
  }
  ++stats_.misses;
  if (seen_.insert(key).second) ++stats_.compulsory_misses;
  auto data = ep.get(req, cost);
  stats_.bytes_from_network += req.bytes();
  try {
    insert(key, data, score_hint.value_or(0.0));
  } catch (const std::bad_alloc&) {
    ++stats_.bypasses;
  }
  return data;
}

bool RmaCache::fits(std::uint64_t bytes, std::uint64_t* where) const {
  if (entries_.size() >= cfg_.table_slots) return false;
  if (bytes == 0) {
    *where = 0;
    return true;
  }
  auto at = ledger_.best_fit(bytes);
  if (!at) return false;
  *where = *at;
  return true;
}

InsertResult RmaCache::insert(const CacheKey& key, std::span<const std::uint64_t> payload, double score) {
  if (entries_.contains(key)) throw InvalidState("insert: key already cached");
  const std::uint64_t bytes = 8 * payload.size();
  if (bytes > cfg_.capacity_bytes) {
    ++stats_.bypasses;
    return InsertResult::Bypassed;
  }
  std::uint64_t where = 0;
  int victims = 0;
  while (!fits(bytes, &where)) {
    if (victims == kMaxVictims || entries_.empty()) {
      ++stats_.bypasses;
      return InsertResult::Bypassed;
    }
    evict(select_victim());
    ++stats_.evictions;
    ++victims;
  }
  if (bytes > 0) {
    ledger_.allocate(where, bytes);
    std::memcpy(buffer_.data() + where / 8, payload.data(), bytes);
  }
  recency_.push_back(key);
  Entry e{where, bytes, score, ++clock_, std::prev(recency_.end())};
  if (cfg_.policy == EvictionPolicy::UserScore) by_score_.emplace(std::make_pair(score, e.last_access), key);
  entries_.emplace(key, e);
  live_bytes_ += bytes;
  return InsertResult::Stored;
}

CacheKey RmaCache::select_victim() const {
  if (entries_.empty()) throw InvalidState("select_victim: cache is empty");
  switch (cfg_.policy) {
    case EvictionPolicy::Lru:
      return recency_.front();
    case EvictionPolicy::UserScore:
      // Lowest score; equal scores fall back to the least recent access.
      return by_score_.begin()->second;
    case EvictionPolicy::LruPositional: {
      // score = rank/live - adjacent_free/capacity, rank 0 = least recent;
      // the minimum is evicted. No entry can beat rank/live - free/capacity,
      // which bounds the scan.
      const double live = static_cast<double>(entries_.size());
      const double cap = static_cast<double>(std::max<std::uint64_t>(cfg_.capacity_bytes, 1));
      const double bonus_bound = static_cast<double>(ledger_.free_bytes()) / cap;
      double best = std::numeric_limits<double>::infinity();
      const CacheKey* victim = nullptr;
      std::uint64_t rank = 0;
      for (const CacheKey& k : recency_) {
        const double base = static_cast<double>(rank) / live;
        if (base - bonus_bound >= best) break;
        const Entry& e = entries_.at(k);
        const double bonus = e.bytes ? static_cast<double>(ledger_.adjacent_free(e.placement, e.bytes)) / cap : 0.0;
        const double s = base - bonus;
        if (s < best) {
          best = s;
          victim = &k;
        }
        ++rank;
      }
      return *victim;
    }
  }
  throw std::logic_error("select_victim: unknown policy");
}

void RmaCache::evict(const CacheKey& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw InvalidState("evict: key not cached");
  Entry& e = it->second;
  ledger_.release(e.placement, e.bytes);
  if (cfg_.policy == EvictionPolicy::UserScore) by_score_.erase({e.score, e.last_access});
  recency_.erase(e.lru);
  live_bytes_ -= e.bytes;
  entries_.erase(it);
}

void RmaCache::erase(const CacheKey& key) { evict(key); }

std::vector<std::string> RmaCache::check_invariants() const {
  std::vector<std::string> bad;
  if (live_bytes_ + ledger_.free_bytes() != cfg_.capacity_bytes) bad.push_back("live + free != capacity");
  if (entries_.size() != recency_.size()) bad.push_back("recency list size mismatch");
  if (entries_.size() > cfg_.table_slots) bad.push_back("more entries than table slots");

  // Sweep free regions and sized entries together in placement order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
  std::uint64_t free_sum = 0;
  for (auto [off, size] : ledger_.regions()) {
    spans.emplace_back(off, size);
    free_sum += size;
  }
  if (free_sum != ledger_.free_bytes()) bad.push_back("ledger free counter drift");
  std::uint64_t live_sum = 0;
  for (const auto& [k, e] : entries_) {
    if (e.bytes != 8 * k.length) bad.push_back("entry size != key length");
    if (e.bytes) spans.emplace_back(e.placement, e.bytes);
    live_sum += e.bytes;
  }
  if (live_sum != live_bytes_) bad.push_back("live byte counter drift");
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i)
    if (spans[i - 1].first + spans[i - 1].second > spans[i].first) {
      bad.push_back("overlapping regions @" + std::to_string(spans[i].first));
      break;
    }
  std::uint64_t prev_end = std::numeric_limits<std::uint64_t>::max();
  for (auto [off, size] : ledger_.regions()) {
    if (off == prev_end) {
      bad.push_back("uncoalesced free regions @" + std::to_string(off));
      break;
    }
    prev_end = off + size;
  }
  return bad;
}

std::uint64_t suggest_table_slots(std::uint64_t n, std::uint64_t capacity_bytes, std::uint64_t graph_bytes,
                                  WindowId which) {
  const std::uint64_t cap_n = std::max<std::uint64_t>(n, 1);
  std::uint64_t slots = 0;
  if (which == WindowId::Offsets) {
    slots = std::min(n, capacity_bytes / 16);
  } else {
    const double r = graph_bytes ? static_cast<double>(capacity_bytes) / static_cast<double>(graph_bytes) : 1.0;
    const double s = std::round(static_cast<double>(n) * r * r);
    slots = s >= static_cast<double>(cap_n) ? cap_n : static_cast<std::uint64_t>(s);
  }
  return std::clamp<std::uint64_t>(slots, 1, cap_n);
}

}  // namespace tricache
