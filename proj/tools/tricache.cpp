// tricache: generate, preprocess, partition, run, compare and sweep.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tricache/errors.hpp"
#include "tricache/engine.hpp"
#include "tricache/graph.hpp"
#include "tricache/graph_io.hpp"
#include "tricache/oracle.hpp"
#include "tricache/partition.hpp"
#include "tricache/rmat.hpp"
#include "tricache/sweep.hpp"
#include "tricache/tcp.hpp"

using namespace tricache;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int log_level() {
  const char* v = std::getenv("TRICACHE_LOG");
  return v ? std::atoi(v) : 0;
}

struct GraphArgs {
  std::string input;
  bool directed = false;
  std::uint64_t seed = 0;
  bool no_relabel = false;
  bool fixpoint = false;

  void add(CLI::App* app) {
    app->add_option("input", input, "edge list or CSR1 file")->required()->check(CLI::ExistingFile);
    app->add_flag("--directed", directed, "treat edges as directed");
    app->add_option("--seed", seed, "relabeling seed");
    app->add_flag("--no-relabel", no_relabel, "keep input order");
    app->add_flag("--fixpoint", fixpoint, "repeat low-degree removal until stable");
  }

  /// CSR1 input is taken as already preprocessed.
  Preprocessed load() const {
    std::ifstream in(input, std::ios::binary);
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() == 4 && std::string(magic, 4) == "CSR1") {
      in.close();
      Preprocessed pp{load_csr(input), {}};
      std::vector<VertexId> ids(pp.graph.n());
      std::iota(ids.begin(), ids.end(), VertexId{0});
      pp.relabel = RelabelMap(ids, ids);
      return pp;
    }
    in.close();
    PreprocessOptions opts;
    opts.seed = seed;
    opts.relabel = !no_relabel;
    opts.fixpoint = fixpoint;
    return preprocess(load_edge_list(input, directed), opts);
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

struct RunArgs {
  GraphArgs graph;
  NodeId p = 1;
  std::string backend = "sim";
  std::string peers;
  double alpha = CostModel{}.alpha;
  double beta = CostModel{}.beta;
  std::string policy = "degree";
  std::optional<std::uint64_t> offsets_bytes, adj_bytes, total_bytes;
  std::string method = "hybrid";
  std::string mode = "lcc";
  std::size_t workers = 1;
  std::size_t cutoff = kDefaultCutoff;
  std::string output, stats_csv;
  std::int64_t fault_bias = 0;

  void add(CLI::App* app, bool with_outputs) {
    graph.add(app);
    app->add_option("--p", p, "number of nodes")->check(CLI::PositiveNumber);
    app->add_option("--backend", backend, "sim or tcp")->check(CLI::IsMember({"sim", "tcp"}));
    app->add_option("--peers", peers, "host:port[,host:port...] for --backend tcp");
    app->add_option("--alpha", alpha, "seconds per get")->check(CLI::NonNegativeNumber);
    app->add_option("--beta", beta, "seconds per byte")->check(CLI::NonNegativeNumber);
    app->add_option("--policy", policy, "adjacency cache policy: lru, positional, degree")
        ->check(CLI::IsMember({"lru", "positional", "degree", "score"}));
    app->add_option("--cache-offsets-bytes", offsets_bytes, "offsets cache bytes per node");
    app->add_option("--cache-adj-bytes", adj_bytes, "adjacency cache bytes per node");
    app->add_option("--cache-total", total_bytes, "cache budget per node, split between both windows");
    app->add_option("--method", method, "hybrid, ssi or binary")->check(CLI::IsMember({"hybrid", "ssi", "binary"}));
    app->add_option("--mode", mode, "lcc or tc")->check(CLI::IsMember({"lcc", "tc"}));
    app->add_option("--workers", workers, "intersection threads per node")->check(CLI::PositiveNumber);
    app->add_option("--cutoff", cutoff, "minimum combined length for parallel intersection");
    if (with_outputs) {
      app->add_option("-o,--output", output, "LCC scores (lcc) or triangle count (tc); default stdout");
      app->add_option("--stats-csv", stats_csv, "per-node statistics");
    }
    app->add_option("--fault-bias", fault_bias)->group("");
  }

  RunConfig config(const CsrGraph& g) const {
    RunConfig cfg;
    cfg.p = p;
    cfg.backend = parse_backend(backend);
    if (!peers.empty()) {
      if (cfg.backend != Backend::Tcp) throw UsageError("--peers requires --backend tcp");
      cfg.peers = parse_peers(peers);
    }
    cfg.cost = {alpha, beta};
    cfg.intersect = parse_method(method);
    cfg.mode = parse_mode(mode);
    if (cfg.mode == RunMode::GlobalTc && g.directed()) throw UsageError("--mode tc needs an undirected graph");
    cfg.workers = workers;
    cfg.cutoff = cutoff;
    cfg.seed = graph.seed;
    cfg.fault_bias = fault_bias;
    cfg.adj_cache.policy = parse_policy(policy);

    if (total_bytes && (offsets_bytes || adj_bytes))
      throw UsageError("--cache-total excludes --cache-offsets-bytes and --cache-adj-bytes");
    if (total_bytes) {
      const std::uint64_t per_node = (g.n() + p - 1) / p;
      const std::uint64_t off = std::min<std::uint64_t>(16 * per_node, *total_bytes);
      cfg.offsets_cache.enabled = true;
      cfg.offsets_cache.capacity_bytes = off;
      cfg.adj_cache.enabled = true;
      cfg.adj_cache.capacity_bytes = *total_bytes - off;
    }
    if (offsets_bytes) {
      cfg.offsets_cache.enabled = true;
      cfg.offsets_cache.capacity_bytes = *offsets_bytes;
    }
    if (adj_bytes) {
      cfg.adj_cache.enabled = true;
      cfg.adj_cache.capacity_bytes = *adj_bytes;
    }
    if (log_level() >= 2) cfg.record_trace = true;
    return cfg;
  }
};

void write_stats_csv(std::ostream& out, const RunStats& st) {
  out << "node,local_reads,remote_reads,gets_offsets,hits_offsets,gets_adj,hits_adj,compulsory,evictions,bytes_net,"
         "bytes_cache,comm_time_s,overlap_time_s,compute_time_s,triangles\n";
  char buf[160];
  for (const NodeStats& n : st.nodes) {
    out << n.node << ',' << n.local_reads << ',' << n.remote_reads << ',' << n.gets_offsets << ',' << n.hits_offsets
        << ',' << n.gets_adj << ',' << n.hits_adj << ',' << n.compulsory << ',' << n.evictions << ',' << n.bytes_net
        << ',' << n.bytes_cache << ',';
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g", n.comm_time, n.overlap_time, n.compute_time);
    out << buf << ',' << n.triangles << '\n';
  }
}

void log_run(const RunOutput& out) {
  const int level = log_level();
  if (level < 1) return;
  const RunStats& st = out.stats;
  std::fprintf(stderr, "nodes=%zu comm=%.6fs makespan=%.6fs imbalance=%.3f\n", st.nodes.size(),
               st.total_comm_time(), st.makespan, st.imbalance);
  if (level < 2) return;
  std::fprintf(stderr, "audit cross_waits=%llu order_violations=%llu\n",
               static_cast<unsigned long long>(st.audit.cross_node_waits),
               static_cast<unsigned long long>(st.audit.order_violations));
  static const char* kinds[] = {"open", "get", "flush", "close"};
  for (const auto& trace : out.traces)
    for (const TraceEvent& ev : trace)
      std::fprintf(stderr, "%llu %s peer=%llu %s [%llu,+%llu) %.3g\n", static_cast<unsigned long long>(ev.node),
                   kinds[static_cast<int>(ev.kind)], static_cast<unsigned long long>(ev.peer), to_string(ev.window),
                   static_cast<unsigned long long>(ev.offset), static_cast<unsigned long long>(ev.length), ev.cost);
}

int cmd_run(const RunArgs& a) {
  const Preprocessed pp = a.graph.load();
  const RunConfig cfg = a.config(pp.graph);
  const RunOutput out = run(pp.graph, cfg);
  log_run(out);

  std::ofstream file;
  std::ostream* dst = &std::cout;
  if (!a.output.empty()) {
    file = open_out(a.output);
    dst = &file;
  }
  if (cfg.mode == RunMode::Lcc) {
    write_lcc(*dst, out.result, pp.relabel);
  } else {
    *dst << "triangles " << out.result.global_triangles << "\nraw " << out.result.raw << '\n';
  }
  if (!a.stats_csv.empty()) {
    auto csv = open_out(a.stats_csv);
    write_stats_csv(csv, out.stats);
  }
  return kExitOk;
}

int cmd_compare(const RunArgs& a) {
  const Preprocessed pp = a.graph.load();
  RunConfig cfg = a.config(pp.graph);
  cfg.mode = RunMode::Lcc;
  const CsrGraph& g = pp.graph;
  const RunOutput out = run(g, cfg);
  const OracleResult ref = brute_lcc(to_edge_list(g));

  double max_dev = 0.0;
  std::optional<VertexId> first;
  for (VertexId v = 0; v < g.n(); ++v) {
    const double dev = std::abs(out.result.scores[v] - ref.lcc[v]);
    max_dev = std::max(max_dev, dev);
    if (!first && (dev > 1e-12 || out.result.triangles[v] != ref.triangles[v])) first = v;
  }
  bool ok = !first;
  std::cout << "vertices " << g.n() << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", max_dev);
  std::cout << "max_abs_deviation " << buf << '\n';
  if (first)
    std::cout << "first_mismatch " << pp.relabel.inverse(*first) << " engine " << out.result.scores[*first]
              << " oracle " << ref.lcc[*first] << '\n';
  else
    std::cout << "first_mismatch none\n";
  if (!g.directed()) {
    cfg.mode = RunMode::GlobalTc;
    const RunOutput tc = run(g, cfg);
    std::cout << "triangles engine " << tc.result.global_triangles << " oracle " << ref.global_triangles << '\n';
    if (tc.result.global_triangles != ref.global_triangles || tc.result.raw != 3 * ref.global_triangles) ok = false;
  }
  std::cout << (ok ? "match" : "MISMATCH") << '\n';
  return ok ? kExitOk : kExitMismatch;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed triangle counting and local clustering coefficients with cached one-sided reads"};
  app.require_subcommand(1);

  // gen-rmat
  RmatParams rp;
  std::string rmat_out;
  auto* gen = app.add_subcommand("gen-rmat", "write an R-MAT edge list");
  gen->add_option("--scale", rp.scale, "log2 of the vertex count")->required();
  gen->add_option("--ef", rp.edge_factor, "edge insertions per vertex");
  gen->add_option("--seed", rp.seed);
  gen->add_option("--a", rp.a);
  gen->add_option("--b", rp.b);
  gen->add_option("--c", rp.c);
  gen->add_option("--d", rp.d);
  gen->add_flag("--directed", rp.directed);
  gen->add_option("-o,--output", rmat_out)->required();

  // preprocess
  GraphArgs pre_args;
  std::string pre_out;
  auto* pre = app.add_subcommand("preprocess", "clean, relabel and write CSR1");
  pre_args.add(pre);
  pre->add_option("-o,--output", pre_out)->required();

  // partition
  GraphArgs part_args;
  NodeId part_p = 1;
  std::string part_prefix;
  auto* part = app.add_subcommand("partition", "write one PRT1 shard per node as <prefix>.<k>.prt");
  part_args.add(part);
  part->add_option("--p", part_p)->required()->check(CLI::PositiveNumber);
  part->add_option("-o,--output", part_prefix, "file prefix")->required();

  // run / compare
  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "compute LCC scores or the global triangle count");
  run_args.add(run_cmd, true);
  RunArgs cmp_args;
  auto* cmp = app.add_subcommand("compare", "check the engine against the brute-force oracle");
  cmp_args.add(cmp, false);

  // sweep
  RunArgs sweep_args;
  std::string sweep_fracs, sweep_windows = "offsets,adj", sweep_policies = "degree", sweep_out;
  std::size_t sweep_points = 10;
  std::uint64_t sweep_reps = 1;
  bool sweep_unbounded = false;
  auto* sweep = app.add_subcommand("sweep", "miss rate against cache size");
  sweep_args.graph.add(sweep);
  sweep->add_option("--p", sweep_args.p)->check(CLI::PositiveNumber);
  sweep->add_option("--alpha", sweep_args.alpha)->check(CLI::NonNegativeNumber);
  sweep->add_option("--beta", sweep_args.beta)->check(CLI::NonNegativeNumber);
  sweep->add_option("--fractions", sweep_fracs, "comma-separated fractions of remote window bytes");
  sweep->add_option("--points", sweep_points, "evenly spaced fractions k/points when --fractions is absent")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--windows", sweep_windows, "offsets,adj");
  sweep->add_option("--policies", sweep_policies, "adjacency policies, comma-separated");
  sweep->add_option("--reps", sweep_reps, "repetitions on relabeled copies")->check(CLI::PositiveNumber);
  sweep->add_flag("--unbounded-table", sweep_unbounded, "size the cache index to n");
  sweep->add_option("-o,--output", sweep_out, "CSV path; default stdout");

  // tcp-serve
  std::vector<std::string> shards;
  std::string serve_host = "127.0.0.1";
  std::uint16_t serve_port = 0;
  auto* serve = app.add_subcommand("tcp-serve", "serve PRT1 shards for --backend tcp");
  serve->add_option("shards", shards, "PRT1 files")->required()->check(CLI::ExistingFile);
  serve->add_option("--host", serve_host);
  serve->add_option("--port", serve_port);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      const EdgeList el = generate_rmat(rp);
      auto out = open_out(rmat_out);
      write_edge_list(out, el);
      return kExitOk;
    }
    if (*pre) {
      const Preprocessed pp = pre_args.load();
      save_csr(pre_out, pp.graph);
      return kExitOk;
    }
    if (*part) {
      const Preprocessed pp = part_args.load();
      const Partition1D pa(pp.graph.n(), part_p);
      for (NodeId k = 0; k < part_p; ++k)
        save_partition(part_prefix + "." + std::to_string(k) + ".prt", pa, build_local(pp.graph, pa, k));
      return kExitOk;
    }
    if (*run_cmd) return cmd_run(run_args);
    if (*cmp) return cmd_compare(cmp_args);
    if (*sweep) {
      const Preprocessed pp = sweep_args.graph.load();
      SweepSpec spec;
      if (!sweep_fracs.empty()) {
        for (const auto& f : split_list(sweep_fracs)) spec.fractions.push_back(std::stod(f));
      } else {
        for (std::size_t k = 1; k <= sweep_points; ++k)
          spec.fractions.push_back(static_cast<double>(k) / static_cast<double>(sweep_points));
      }
      spec.windows.clear();
      for (const auto& w : split_list(sweep_windows)) {
        if (w == "offsets") spec.windows.push_back(WindowId::Offsets);
        else if (w == "adj") spec.windows.push_back(WindowId::Adjacency);
        else throw UsageError("unknown window '" + w + "'");
      }
      spec.policies.clear();
      for (const auto& pol : split_list(sweep_policies)) spec.policies.push_back(parse_policy(pol));
      spec.repetitions = sweep_reps;
      spec.seed = sweep_args.graph.seed;
      spec.unbounded_table = sweep_unbounded;
      spec.base.p = sweep_args.p;
      spec.base.cost = {sweep_args.alpha, sweep_args.beta};
      const auto rows = run_sweep(pp.graph, spec);
      if (sweep_out.empty()) {
        write_sweep_csv(std::cout, rows);
      } else {
        auto out = open_out(sweep_out);
        write_sweep_csv(out, rows);
      }
      return kExitOk;
    }
    if (*serve) {
      std::vector<PartitionFile> files;
      for (const auto& path : shards) files.push_back(load_partition(path));
      const NodeId p = files.front().p;
      Fabric fabric(p);
      for (const auto& f : files) {
        if (f.p != p || f.n != files.front().n) throw UsageError("shards come from different partitions");
        fabric.expose(f.local);
      }
      TcpServer server(fabric, serve_host, serve_port);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening " << serve_host << ':' << server.port() << std::endl;
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
      if (log_level() >= 1)
        std::fprintf(stderr, "served %llu requests, %llu protocol errors\n",
                     static_cast<unsigned long long>(server.requests_served()),
                     static_cast<unsigned long long>(server.protocol_errors()));
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
  return kExitUsage;
}
