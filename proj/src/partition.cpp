#include "tricache/partition.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "tricache/errors.hpp"
#include "tricache/graph_io.hpp"

namespace tricache {

using u128 = unsigned __int128;

Partition1D::Partition1D(VertexId n, NodeId p) : n_(n), p_(p) {
  if (p == 0) throw std::invalid_argument("partition: p must be >= 1");
  bounds_.resize(p + 1);
  for (NodeId k = 0; k <= p; ++k) bounds_[k] = static_cast<VertexId>((u128{k} * n + p - 1) / p);
}

NodeId Partition1D::owner(VertexId v) const {
  if (v >= n_) throw std::out_of_range("owner: vertex " + std::to_string(v) + " >= n");
  // v >= ceil(k n / p)  <=>  k <= v p / n
  return static_cast<NodeId>(u128{v} * p_ / n_);
}

Partition1D make_partition(VertexId n, NodeId p) { return Partition1D(n, p); }

LocalCsr build_local(const CsrGraph& g, const Partition1D& part, NodeId k) {
  if (k >= part.p()) throw std::invalid_argument("build_local: node id >= p");
  if (part.n() != g.n()) throw std::invalid_argument("build_local: partition does not match graph");
  const VertexId lo = part.begin(k), hi = part.end(k);
  const auto off = g.offsets();
  std::vector<EdgeIndex> offsets(hi - lo + 1);
  for (VertexId v = lo; v <= hi; ++v) offsets[v - lo] = off[v] - off[lo];
  const auto adj = g.adjacencies().subspan(off[lo], off[hi] - off[lo]);
  return LocalCsr{k, lo, CsrGraph(g.directed(), std::move(offsets), {adj.begin(), adj.end()})};
}

double cross_edge_fraction(const CsrGraph& g, const Partition1D& part) {
  if (g.m() == 0) return 0.0;
  std::uint64_t cross = 0;
  for (NodeId k = 0; k < part.p(); ++k) {
    const VertexId lo = part.begin(k), hi = part.end(k);
    const auto off = g.offsets();
    for (EdgeIndex e = off[lo]; e < off[hi]; ++e) {
      const VertexId u = g.adjacencies()[e];
      cross += (u < lo || u >= hi);
    }
  }
  return static_cast<double>(cross) / static_cast<double>(g.m());
}

void write_partition(std::ostream& out, const Partition1D& part, const LocalCsr& local) {
  out.write("PRT1", 4);
  detail::put_u64(out, part.n());
  detail::put_u64(out, part.p());
  detail::put_u64(out, local.node);
  write_csr(out, local.csr);
}

PartitionFile read_partition(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != "PRT1") throw FormatError("bad PRT1 magic");
  PartitionFile f;
  f.n = detail::get_u64(in);
  f.p = detail::get_u64(in);
  f.local.node = detail::get_u64(in);
  if (f.p == 0 || f.local.node >= f.p) throw FormatError("PRT1: node id out of range");
  const Partition1D part(f.n, f.p);
  f.local.base = part.begin(f.local.node);
  f.local.csr = read_csr(in, /*global_ids=*/true);
  if (f.local.csr.n() != part.size(f.local.node)) throw FormatError("PRT1: row count does not match partition");
  for (VertexId u : f.local.csr.adjacencies())
    if (u >= f.n) throw FormatError("PRT1: adjacency id >= n");
  return f;
}

void save_partition(const std::string& path, const Partition1D& part, const LocalCsr& local) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_partition(out, part, local);
  if (!out) throw std::runtime_error("write failed: " + path);
}

PartitionFile load_partition(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_partition(in);
}

}  // namespace tricache
