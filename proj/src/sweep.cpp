#include "tricache/sweep.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace tricache {

namespace {

SweepRow measure(const std::vector<CsrGraph>& graphs, RunConfig cfg, WindowId w, EvictionPolicy pol, double frac,
                 bool unbounded) {
  WindowCacheSpec spec;
  spec.enabled = true;
  spec.remote_fraction = frac;
  spec.policy = pol;
  if (unbounded) spec.table_slots = graphs.front().n() ? graphs.front().n() : 1;
  cfg.offsets_cache = {};
  cfg.adj_cache = {};
  (w == WindowId::Offsets ? cfg.offsets_cache : cfg.adj_cache) = spec;

  SweepRow row;
  row.kind = "data";
  row.window = w;
  row.policy = pol;
  row.fraction = frac;
  for (const CsrGraph& g : graphs) {
    const RunOutput out = run(g, cfg);
    for (const NodeStats& n : out.stats.nodes) {
      const CacheStats& cs = w == WindowId::Offsets ? n.offsets_stats : n.adj_stats;
      row.capacity_bytes += w == WindowId::Offsets ? n.offsets_capacity : n.adj_capacity;
      row.live_entries += w == WindowId::Offsets ? n.offsets_live_entries : n.adj_live_entries;
      row.gets += cs.gets;
      row.misses += cs.misses;
      row.compulsory += cs.compulsory_misses;
      row.bytes_net += n.bytes_net;
      row.comm_time += n.comm_time;
    }
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const CsrGraph& g, const SweepSpec& spec) {
  if (spec.fractions.empty()) throw std::invalid_argument("sweep: no cache sizes given");
  for (double f : spec.fractions)
    if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("sweep: fractions must lie in (0, 1]");
  if (spec.repetitions == 0) throw std::invalid_argument("sweep: repetitions must be >= 1");
  if (spec.policies.empty()) throw std::invalid_argument("sweep: no policies given");

  std::vector<CsrGraph> graphs{g};
  for (std::uint64_t r = 1; r < spec.repetitions; ++r)
    graphs.push_back(permute(g, random_permutation(g.n(), spec.seed + r)));

  RunConfig cfg = spec.base;
  cfg.seed = spec.seed;
  std::vector<SweepRow> rows;
  for (WindowId w : spec.windows) {
    const std::vector<EvictionPolicy> pols =
        w == WindowId::Offsets ? std::vector<EvictionPolicy>{EvictionPolicy::Lru} : spec.policies;
    bool baseline = false;
    for (EvictionPolicy pol : pols)
      for (double f : spec.fractions) {
        SweepRow row = measure(graphs, cfg, w, pol, f, spec.unbounded_table);
        if (!baseline) {
          SweepRow b = row;
          b.kind = "baseline";
          b.fraction = 0.0;
          b.capacity_bytes = 0;
          b.misses = b.compulsory;
          b.live_entries = 0;
          rows.push_back(b);
          baseline = true;
        }
        rows.push_back(row);
      }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "kind,window,policy,fraction,capacity_bytes,gets,misses,compulsory,miss_rate,live_entries,bytes_net,"
         "comm_time_s\n";
  char buf[128];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g", r.fraction);
    out << r.kind << ',' << to_string(r.window) << ',' << to_string(r.policy) << ',' << buf << ',' << r.capacity_bytes
        << ',' << r.gets << ',' << r.misses << ',' << r.compulsory << ',';
    std::snprintf(buf, sizeof buf, "%.9g", r.miss_rate());
    out << buf << ',' << r.live_entries << ',' << r.bytes_net << ',';
    std::snprintf(buf, sizeof buf, "%.9g", r.comm_time);
    out << buf << '\n';
  }
}

}  // namespace tricache
