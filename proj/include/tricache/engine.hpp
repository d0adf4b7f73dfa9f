#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tricache/cache.hpp"
#include "tricache/graph.hpp"
#include "tricache/intersect.hpp"
#include "tricache/partition.hpp"
#include "tricache/tcp.hpp"
#include "tricache/window.hpp"

namespace tricache {

enum class Backend { Sim, Tcp };
enum class IntersectMethod { Hybrid, SSI, Binary };
enum class RunMode { Lcc, GlobalTc };

const char* to_string(Backend b);
const char* to_string(IntersectMethod m);
const char* to_string(RunMode m);
Backend parse_backend(const std::string& s);
IntersectMethod parse_method(const std::string& s);
RunMode parse_mode(const std::string& s);

/// Cache in front of one window on every node.
struct WindowCacheSpec {
  bool enabled = false;
  std::uint64_t capacity_bytes = 0;
  /// When set, overrides capacity_bytes with this fraction of the bytes the
  /// node can read remotely through the window.
  std::optional<double> remote_fraction;
  /// 0 picks suggest_table_slots().
  std::uint64_t table_slots = 0;
  EvictionPolicy policy = EvictionPolicy::Lru;
};

struct RunConfig {
  NodeId p = 1;
  Backend backend = Backend::Sim;
  /// Tcp only. Empty: serve the windows from an in-process server.
  std::vector<Peer> peers;
  CostModel cost;
  WindowCacheSpec offsets_cache;
  WindowCacheSpec adj_cache{false, 0, std::nullopt, 0, EvictionPolicy::UserScore};
  IntersectMethod intersect = IntersectMethod::Hybrid;
  RunMode mode = RunMode::Lcc;
  std::size_t workers = 1;
  std::size_t cutoff = kDefaultCutoff;
  std::uint64_t seed = 0;
  bool record_trace = false;
  /// Keep, per node, the sequence of remote vertices whose adjacency was read.
  bool record_reads = false;
  /// Nodes run on their own threads; false runs them one after another.
  bool concurrent_nodes = true;
  /// Added to every intersection result. Testing hook for the comparison path.
  std::int64_t fault_bias = 0;
};

struct NodeStats {
  NodeId node = 0;
  std::uint64_t local_reads = 0;
  std::uint64_t remote_reads = 0;  // window gets issued, cached or not
  std::uint64_t remote_vertices = 0;  // read_remote_adjacency calls
  std::uint64_t gets_offsets = 0, hits_offsets = 0;
  std::uint64_t gets_adj = 0, hits_adj = 0;
  std::uint64_t compulsory = 0;
  std::uint64_t evictions = 0;
  std::uint64_t bytes_net = 0;
  std::uint64_t bytes_cache = 0;
  double comm_time = 0.0;      // modeled
  double overlap_time = 0.0;   // modeled, double-buffered
  double compute_time = 0.0;   // measured
  std::uint64_t triangles = 0;
  CacheStats offsets_stats, adj_stats;
  std::uint64_t offsets_live_entries = 0, adj_live_entries = 0;
  std::uint64_t offsets_capacity = 0, adj_capacity = 0;
  std::uint64_t offsets_slots = 0, adj_slots = 0;
};

struct RunStats {
  std::vector<NodeStats> nodes;
  double makespan = 0.0;   // max overlapped node time
  double imbalance = 1.0;  // max / mean node time
  std::uint64_t seed = 0;
  AsyncAudit audit;

  double total_comm_time() const;
  std::uint64_t total_remote_vertices() const;
};

struct LccResult {
  std::vector<double> scores;            // Lcc mode, by dense vertex id
  std::vector<std::uint64_t> triangles;  // Lcc mode, ordered-pair numerators
  std::uint64_t global_triangles = 0;
  std::uint64_t raw = 0;  // sum of count_above terms, 3 per triangle

  friend bool operator==(const LccResult&, const LccResult&) = default;
};

struct RunOutput {
  LccResult result;
  RunStats stats;
  std::vector<std::vector<TraceEvent>> traces;       // record_trace
  std::vector<std::vector<VertexId>> remote_reads;   // record_reads
};

/// Dispatches on cfg.mode. Throws std::invalid_argument on an inconsistent
/// configuration before any node starts.
RunOutput run(const CsrGraph& g, const RunConfig& cfg);
RunOutput run_lcc(const CsrGraph& g, RunConfig cfg);
/// Undirected only.
RunOutput run_global_tc(const CsrGraph& g, RunConfig cfg);

/// Fetches adj(v) from its owner: a 2-element get on the offsets window, then
/// the slice on the adjacency window, each through its cache when present.
class RemoteReader {
 public:
  RemoteReader(Endpoint& ep, const Partition1D& part, RmaCache* offsets_cache, RmaCache* adj_cache);

  /// `cost` receives the modeled network seconds of both gets.
  std::vector<VertexId> read(VertexId v, double* cost = nullptr);

  std::uint64_t gets_offsets() const noexcept { return gets_offsets_; }
  std::uint64_t gets_adj() const noexcept { return gets_adj_; }

 private:
  std::vector<std::uint64_t> get(RmaCache* cache, const GetRequest& req, std::optional<double> hint, double* cost);

  Endpoint& ep_;
  const Partition1D& part_;
  RmaCache* offsets_cache_;
  RmaCache* adj_cache_;
  std::uint64_t gets_offsets_ = 0, gets_adj_ = 0;
};

/// t / (d (d-1)); 0 when d < 2.
double lcc_score(std::uint64_t t, std::uint64_t d, bool directed = false);

/// max(0, (deg_in - p) / p): expected re-reads of one remote vertex by one node.
double expected_remote_reads(std::uint64_t deg_in, std::uint64_t p);

/// reuse count -> number of distinct vertices read that many times.
std::map<std::uint64_t, std::uint64_t> reuse_histogram(std::span<const VertexId> reads);

/// Share of reads whose target is among the ceil(n/10) highest-degree
/// vertices (ties broken by id).
double top_decile_fraction(std::span<const VertexId> reads, std::span<const std::uint64_t> degrees);

/// Streaming form of the double-buffer pipeline time
/// f_1 + sum_{e<E} max(c_e, f_{e+1}) + c_E.
class OverlapAccumulator {
 public:
  void push(double fetch, double compute);
  double overlapped() const noexcept { return started_ ? total_ + last_compute_ : 0.0; }
  double sequential() const noexcept { return sequential_; }

 private:
  bool started_ = false;
  double total_ = 0.0;
  double last_compute_ = 0.0;
  double sequential_ = 0.0;
};

struct OverlapEstimate {
  double overlapped = 0.0;
  double sequential = 0.0;
};
OverlapEstimate overlap_estimate(std::span<const double> fetch, std::span<const double> compute);

/// "<original id> <score>" per input vertex, ascending id; removed vertices
/// score 0.
void write_lcc(std::ostream& out, const LccResult& r, const RelabelMap& relabel);

/// Bytes node k can read through `which` from other nodes.
std::uint64_t remote_window_bytes(const CsrGraph& g, const Partition1D& part, NodeId k, WindowId which);

}  // namespace tricache
