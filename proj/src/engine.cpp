#include "tricache/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "tricache/errors.hpp"
#include "tricache/worker_pool.hpp"

namespace tricache {

const char* to_string(Backend b) { return b == Backend::Sim ? "sim" : "tcp"; }

const char* to_string(IntersectMethod m) {
  switch (m) {
    case IntersectMethod::Hybrid: return "hybrid";
    case IntersectMethod::SSI: return "ssi";
    case IntersectMethod::Binary: return "binary";
  }
  return "?";
}

const char* to_string(RunMode m) { return m == RunMode::Lcc ? "lcc" : "tc"; }

Backend parse_backend(const std::string& s) {
  if (s == "sim") return Backend::Sim;
  if (s == "tcp") return Backend::Tcp;
  throw std::invalid_argument("unknown backend '" + s + "'");
}

IntersectMethod parse_method(const std::string& s) {
  if (s == "hybrid") return IntersectMethod::Hybrid;
  if (s == "ssi") return IntersectMethod::SSI;
  if (s == "binary") return IntersectMethod::Binary;
  throw std::invalid_argument("unknown intersection method '" + s + "'");
}

RunMode parse_mode(const std::string& s) {
  if (s == "lcc") return RunMode::Lcc;
  if (s == "tc") return RunMode::GlobalTc;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

double RunStats::total_comm_time() const {
  double t = 0.0;
  for (const auto& n : nodes) t += n.comm_time;
  return t;
}

std::uint64_t RunStats::total_remote_vertices() const {
  std::uint64_t t = 0;
  for (const auto& n : nodes) t += n.remote_vertices;
  return t;
}

double lcc_score(std::uint64_t t, std::uint64_t d, bool /*directed*/) {
  if (d < 2) return 0.0;
  return static_cast<double>(t) / (static_cast<double>(d) * static_cast<double>(d - 1));
}

double expected_remote_reads(std::uint64_t deg_in, std::uint64_t p) {
  if (p == 0) throw std::invalid_argument("expected_remote_reads: p must be >= 1");
  if (deg_in <= p) return 0.0;
  return static_cast<double>(deg_in - p) / static_cast<double>(p);
}

std::map<std::uint64_t, std::uint64_t> reuse_histogram(std::span<const VertexId> reads) {
  std::unordered_map<VertexId, std::uint64_t> counts;
  for (VertexId v : reads) ++counts[v];
  std::map<std::uint64_t, std::uint64_t> hist;
  for (const auto& [v, c] : counts) ++hist[c];
  return hist;
}

double top_decile_fraction(std::span<const VertexId> reads, std::span<const std::uint64_t> degrees) {
  if (reads.empty() || degrees.empty()) return 0.0;
  std::vector<VertexId> order(degrees.size());
  std::iota(order.begin(), order.end(), VertexId{0});
  const std::size_t top = (degrees.size() + 9) / 10;
  std::partial_sort(order.begin(), order.begin() + top, order.end(), [&](VertexId a, VertexId b) {
    return degrees[a] != degrees[b] ? degrees[a] > degrees[b] : a < b;
  });
  std::vector<char> hot(degrees.size(), 0);
  for (std::size_t i = 0; i < top; ++i) hot[order[i]] = 1;
  std::uint64_t hits = 0;
  for (VertexId v : reads)
    if (v < hot.size() && hot[v]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(reads.size());
}

void OverlapAccumulator::push(double fetch, double compute) {
  if (!started_) {
    total_ = fetch;
    started_ = true;
  } else {
    total_ += std::max(last_compute_, fetch);
  }
  last_compute_ = compute;
  sequential_ += fetch + compute;
}

OverlapEstimate overlap_estimate(std::span<const double> fetch, std::span<const double> compute) {
  if (fetch.size() != compute.size()) throw std::invalid_argument("overlap_estimate: length mismatch");
  OverlapAccumulator acc;
  for (std::size_t e = 0; e < fetch.size(); ++e) acc.push(fetch[e], compute[e]);
  return {acc.overlapped(), acc.sequential()};
}

void write_lcc(std::ostream& out, const LccResult& r, const RelabelMap& relabel) {
  char buf[64];
  for (VertexId id : relabel.original_ids()) {
    const VertexId d = relabel.forward(id);
    const double s = d == kNoVertex || d >= r.scores.size() ? 0.0 : r.scores[d];
    std::snprintf(buf, sizeof buf, "%.12g", s);
    out << id << ' ' << buf << '\n';
  }
}

std::uint64_t remote_window_bytes(const CsrGraph& g, const Partition1D& part, NodeId k, WindowId which) {
  if (which == WindowId::Offsets) return 16 * (g.n() - part.size(k));
  const auto off = g.offsets();
  const std::uint64_t local = off[part.end(k)] - off[part.begin(k)];
  return 8 * (g.m() - local);
}

// ---------------------------------------------------------------------------

RemoteReader::RemoteReader(Endpoint& ep, const Partition1D& part, RmaCache* offsets_cache, RmaCache* adj_cache)
    : ep_(ep), part_(part), offsets_cache_(offsets_cache), adj_cache_(adj_cache) {}

std::vector<std::uint64_t> RemoteReader::get(RmaCache* cache, const GetRequest& req, std::optional<double> hint,
                                             double* cost) {
  *cost = 0.0;
  if (cache) return cache->cached_get(ep_, req, hint, cost);
  return ep_.get(req, cost);
}

std::vector<VertexId> RemoteReader::read(VertexId v, double* cost) {
  const NodeId owner = part_.owner(v);
  if (owner == ep_.self()) throw std::invalid_argument("read_remote_adjacency: vertex is local");
  double c1 = 0.0, c2 = 0.0;
  const auto range = get(offsets_cache_, {owner, WindowId::Offsets, v - part_.begin(owner), 2}, std::nullopt, &c1);
  ++gets_offsets_;
  if (range.size() != 2 || range[1] < range[0]) throw ProtocolError("offsets read returned a bad range");
  const std::uint64_t deg = range[1] - range[0];
  auto adj = get(adj_cache_, {owner, WindowId::Adjacency, range[0], deg}, static_cast<double>(deg), &c2);
  ++gets_adj_;
  if (cost) *cost = c1 + c2;
  return adj;
}

// ---------------------------------------------------------------------------

namespace {

void check_spec(const WindowCacheSpec& s, const char* which) {
  if (!s.enabled) return;
  if (s.remote_fraction && !(*s.remote_fraction >= 0.0 && *s.remote_fraction <= 1.0))
    throw std::invalid_argument(std::string(which) + " cache: remote fraction must lie in [0, 1]");
}

void check_config(const CsrGraph& g, const RunConfig& cfg) {
  if (cfg.p == 0) throw std::invalid_argument("run: p must be >= 1");
  if (cfg.workers == 0) throw std::invalid_argument("run: workers must be >= 1");
  if (cfg.mode == RunMode::GlobalTc && g.directed())
    throw std::invalid_argument("run: global triangle counting needs an undirected graph");
  if (cfg.backend == Backend::Sim && !cfg.peers.empty())
    throw std::invalid_argument("run: peers are only meaningful with the tcp backend");
  if (cfg.backend == Backend::Tcp && cfg.peers.size() > 1 && cfg.peers.size() != cfg.p)
    throw std::invalid_argument("run: need one peer, or exactly p peers");
  if (!(cfg.cost.alpha >= 0.0) || !(cfg.cost.beta >= 0.0))
    throw std::invalid_argument("run: cost model parameters must be non-negative");
  check_spec(cfg.offsets_cache, "offsets");
  check_spec(cfg.adj_cache, "adjacency");
}

std::unique_ptr<RmaCache> make_cache(const WindowCacheSpec& s, const CsrGraph& g, const Partition1D& part, NodeId k,
                                     WindowId which) {
  if (!s.enabled) return nullptr;
  const std::uint64_t remote = remote_window_bytes(g, part, k, which);
  std::uint64_t cap = s.capacity_bytes;
  if (s.remote_fraction) cap = static_cast<std::uint64_t>(std::floor(*s.remote_fraction * static_cast<double>(remote)));
  const std::uint64_t n_remote = g.n() - part.size(k);
  CacheConfig cc;
  cc.capacity_bytes = cap;
  cc.table_slots = s.table_slots ? s.table_slots : suggest_table_slots(n_remote, cap, remote, which);
  cc.policy = s.policy;
  return std::make_unique<RmaCache>(cc);
}

struct NodeResult {
  NodeStats stats;
  std::vector<std::uint64_t> triangles;  // owned rows
  std::uint64_t raw = 0;
  std::vector<TraceEvent> trace;
  std::vector<VertexId> reads;
};

class Counter {
 public:
  explicit Counter(const RunConfig& cfg) : cfg_(cfg), pool_(cfg.workers) {}

  std::uint64_t count(Slice a, Slice b) {
    std::uint64_t c = 0;
    switch (cfg_.intersect) {
      case IntersectMethod::Hybrid:
        c = pool_.size() > 1 ? parallel_count(a, b, pool_, cfg_.cutoff) : hybrid_count(a, b);
        break;
      case IntersectMethod::SSI:
        c = ssi_count(a, b);
        break;
      case IntersectMethod::Binary:
        c = a.size() <= b.size() ? binary_count(a, b) : binary_count(b, a);
        break;
    }
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(c) + cfg_.fault_bias);
  }

  std::uint64_t count_above(Slice a, Slice b, VertexId floor) {
    a = a.subspan(std::upper_bound(a.begin(), a.end(), floor) - a.begin());
    b = b.subspan(std::upper_bound(b.begin(), b.end(), floor) - b.begin());
    return count(a, b);
  }

 private:
  const RunConfig& cfg_;
  WorkerPool pool_;
};

NodeResult run_node(const CsrGraph& g, const Partition1D& part, const LocalCsr& local, Transport& transport,
                    const RunConfig& cfg) {
  using clock = std::chrono::steady_clock;
  NodeResult out;
  NodeStats& st = out.stats;
  st.node = local.node;

  auto oc = make_cache(cfg.offsets_cache, g, part, local.node, WindowId::Offsets);
  auto ac = make_cache(cfg.adj_cache, g, part, local.node, WindowId::Adjacency);
  Endpoint ep(local.node, transport, cfg.cost, cfg.record_trace);
  RemoteReader reader(ep, part, oc.get(), ac.get());
  Counter counter(cfg);
  OverlapAccumulator overlap;

  const bool tc = cfg.mode == RunMode::GlobalTc;
  out.triangles.assign(local.csr.n(), 0);

  ep.open_epoch();
  std::vector<VertexId> remote;
  for (VertexId r = 0; r < local.csr.n(); ++r) {
    const Slice adj_i = local.csr.adjacency(r);
    std::uint64_t t = 0;
    for (VertexId vj : adj_i) {
      double fetch = 0.0;
      Slice adj_j;
      if (local.owns(vj)) {
        ++st.local_reads;
        adj_j = local.adjacency(vj);
      } else {
        remote = reader.read(vj, &fetch);
        ep.flush();
        ++st.remote_vertices;
        if (cfg.record_reads) out.reads.push_back(vj);
        adj_j = remote;
      }
      const auto t0 = clock::now();
      t += tc ? counter.count_above(adj_i, adj_j, vj) : counter.count(adj_i, adj_j);
      const double compute = std::chrono::duration<double>(clock::now() - t0).count();
      st.compute_time += compute;
      overlap.push(fetch, compute);
    }
    out.triangles[r] = t;
    out.raw += t;
  }
  ep.close_epoch();

  st.triangles = out.raw;
  st.gets_offsets = reader.gets_offsets();
  st.gets_adj = reader.gets_adj();
  st.remote_reads = st.gets_offsets + st.gets_adj;
  st.bytes_net = ep.stats().bytes;
  st.comm_time = ep.stats().comm_time;
  st.overlap_time = overlap.overlapped();
  for (auto* c : {oc.get(), ac.get()}) {
    if (!c) continue;
    st.compulsory += c->stats().compulsory_misses;
    st.evictions += c->stats().evictions;
    st.bytes_cache += c->stats().bytes_from_cache;
  }
  if (oc) {
    st.offsets_stats = oc->stats();
    st.hits_offsets = oc->stats().hits;
    st.offsets_live_entries = oc->live_entries();
    st.offsets_capacity = oc->config().capacity_bytes;
    st.offsets_slots = oc->config().table_slots;
  }
  if (ac) {
    st.adj_stats = ac->stats();
    st.hits_adj = ac->stats().hits;
    st.adj_live_entries = ac->live_entries();
    st.adj_capacity = ac->config().capacity_bytes;
    st.adj_slots = ac->config().table_slots;
  }
  out.trace = ep.trace();
  return out;
}

}  // namespace

RunOutput run(const CsrGraph& g, const RunConfig& cfg) {
  check_config(g, cfg);
  const Partition1D part(g.n(), cfg.p);

  std::vector<LocalCsr> locals;
  locals.reserve(cfg.p);
  for (NodeId k = 0; k < cfg.p; ++k) locals.push_back(build_local(g, part, k));

  Fabric fabric(cfg.p);
  for (const auto& l : locals) fabric.expose(l);

  std::unique_ptr<TcpServer> server;
  std::vector<std::unique_ptr<Transport>> transports;
  if (cfg.backend == Backend::Sim) {
    for (NodeId k = 0; k < cfg.p; ++k) transports.push_back(std::make_unique<SimTransport>(fabric));
  } else {
    auto peers = cfg.peers;
    if (peers.empty()) {
      server = std::make_unique<TcpServer>(fabric);
      peers = {server->peer()};
    }
    for (NodeId k = 0; k < cfg.p; ++k) transports.push_back(std::make_unique<TcpTransport>(peers));
  }

  std::vector<NodeResult> results(cfg.p);
  std::vector<std::exception_ptr> errors(cfg.p);
  auto work = [&](NodeId k) {
    try {
      results[k] = run_node(g, part, locals[k], *transports[k], cfg);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (cfg.concurrent_nodes && cfg.p > 1) {
    std::vector<std::thread> threads;
    for (NodeId k = 0; k < cfg.p; ++k) threads.emplace_back(work, k);
    for (auto& t : threads) t.join();
  } else {
    for (NodeId k = 0; k < cfg.p; ++k) work(k);
  }
  if (server) server->stop();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  RunOutput out;
  LccResult& res = out.result;
  if (cfg.mode == RunMode::Lcc) {
    res.triangles.resize(g.n());
    res.scores.resize(g.n());
  }
  std::uint64_t sum = 0;
  for (NodeId k = 0; k < cfg.p; ++k) {
    auto& r = results[k];
    sum += r.raw;
    if (cfg.mode == RunMode::Lcc)
      for (VertexId i = 0; i < r.triangles.size(); ++i) {
        const VertexId v = part.begin(k) + i;
        res.triangles[v] = r.triangles[i];
        res.scores[v] = lcc_score(r.triangles[i], g.degree(v), g.directed());
      }
    out.stats.nodes.push_back(r.stats);
    if (cfg.record_trace) out.traces.push_back(std::move(r.trace));
    if (cfg.record_reads) out.remote_reads.push_back(std::move(r.reads));
  }
  if (cfg.mode == RunMode::GlobalTc) {
    res.raw = sum;
    res.global_triangles = sum / 3;
  } else if (!g.directed()) {
    // Each triangle adds 2 to the numerator of each of its corners.
    res.raw = sum / 2;
    res.global_triangles = sum / 6;
  }

  RunStats& rs = out.stats;
  rs.seed = cfg.seed;
  double mx = 0.0, mean = 0.0;
  for (const auto& n : rs.nodes) {
    mx = std::max(mx, n.overlap_time);
    mean += n.overlap_time;
  }
  mean /= static_cast<double>(rs.nodes.size());
  rs.makespan = mx;
  rs.imbalance = mean > 0.0 ? mx / mean : 1.0;
  if (cfg.record_trace) rs.audit = audit_asynchrony(out.traces);
  return out;
}

RunOutput run_lcc(const CsrGraph& g, RunConfig cfg) {
  cfg.mode = RunMode::Lcc;
  return run(g, cfg);
}

RunOutput run_global_tc(const CsrGraph& g, RunConfig cfg) {
  cfg.mode = RunMode::GlobalTc;
  return run(g, cfg);
}

}  // namespace tricache
