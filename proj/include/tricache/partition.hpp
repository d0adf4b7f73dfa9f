#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tricache/graph.hpp"

namespace tricache {

using NodeId = std::uint64_t;

/// Contiguous 1D vertex ranges: node k owns [bound(k), bound(k+1)) with
/// bound(k) = ceil(k*n/p).
class Partition1D {
 public:
  Partition1D(VertexId n, NodeId p);

  VertexId n() const noexcept { return n_; }
  NodeId p() const noexcept { return p_; }
  VertexId begin(NodeId k) const { return bounds_.at(k); }
  VertexId end(NodeId k) const { return bounds_.at(k + 1); }
  VertexId size(NodeId k) const { return end(k) - begin(k); }
  std::span<const VertexId> bounds() const noexcept { return bounds_; }

  /// Throws std::out_of_range for v >= n.
  NodeId owner(VertexId v) const;

 private:
  VertexId n_;
  NodeId p_;
  std::vector<VertexId> bounds_;
};

Partition1D make_partition(VertexId n, NodeId p);

/// Rows of one node. Offsets are rebased to 0; adjacency entries keep their
/// global ids.
struct LocalCsr {
  NodeId node = 0;
  VertexId base = 0;
  CsrGraph csr;

  bool owns(VertexId v) const noexcept { return v >= base && v - base < csr.n(); }
  std::span<const VertexId> adjacency(VertexId global) const { return csr.adjacency(global - base); }
};

LocalCsr build_local(const CsrGraph& g, const Partition1D& part, NodeId k);

/// Fraction of stored edges whose endpoints have different owners; 0 when m = 0.
double cross_edge_fraction(const CsrGraph& g, const Partition1D& part);

// "PRT1" | u64 n | u64 p | u64 k | LocalCsr rows in CSR1 layout.
void write_partition(std::ostream& out, const Partition1D& part, const LocalCsr& local);
struct PartitionFile {
  VertexId n = 0;
  NodeId p = 0;
  LocalCsr local;
};
PartitionFile read_partition(std::istream& in);
void save_partition(const std::string& path, const Partition1D& part, const LocalCsr& local);
PartitionFile load_partition(const std::string& path);

}  // namespace tricache
