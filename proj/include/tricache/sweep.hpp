#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tricache/cache.hpp"
#include "tricache/engine.hpp"

namespace tricache {

/// Cache-size experiment. Each data row runs the engine with a single
/// window cached; capacities are fractions of the bytes a node can read
/// remotely through that window.
struct SweepSpec {
  std::vector<double> fractions;         // each in (0, 1]
  std::vector<WindowId> windows{WindowId::Offsets, WindowId::Adjacency};
  /// Policies for the adjacency window. The offsets window always uses LRU.
  std::vector<EvictionPolicy> policies{EvictionPolicy::UserScore};
  std::uint64_t repetitions = 1;         // extra repetitions run on relabeled copies
  std::uint64_t seed = 0;
  /// Size the index to n instead of suggest_table_slots().
  bool unbounded_table = false;
  RunConfig base;                        // p, backend, cost, method...
};

struct SweepRow {
  std::string kind;  // "data" or "baseline"
  WindowId window = WindowId::Offsets;
  EvictionPolicy policy = EvictionPolicy::Lru;
  double fraction = 0.0;
  std::uint64_t capacity_bytes = 0;  // summed over nodes
  std::uint64_t gets = 0;
  std::uint64_t misses = 0;
  std::uint64_t compulsory = 0;
  std::uint64_t live_entries = 0;
  std::uint64_t bytes_net = 0;
  double comm_time = 0.0;

  double miss_rate() const noexcept { return gets ? static_cast<double>(misses) / gets : 0.0; }
  double compulsory_rate() const noexcept { return gets ? static_cast<double>(compulsory) / gets : 0.0; }
};

/// Throws std::invalid_argument for an empty or out-of-range size list.
std::vector<SweepRow> run_sweep(const CsrGraph& g, const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace tricache
