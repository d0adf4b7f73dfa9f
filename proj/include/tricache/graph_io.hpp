#pragma once

#include <iosfwd>
#include <string>

#include "tricache/graph.hpp"

namespace tricache {

void write_edge_list(std::ostream& out, const EdgeList& el);

// "CSR1" | u8 directed | u64 n | u64 m | (n+1) x u64 offsets | m x u64 adjacencies.
// All integers little-endian.
void write_csr(std::ostream& out, const CsrGraph& g);
/// `global_ids` permits adjacency entries >= n (rows of one partition).
CsrGraph read_csr(std::istream& in, bool global_ids = false);

void save_csr(const std::string& path, const CsrGraph& g);
CsrGraph load_csr(const std::string& path);

/// Reads a text edge list, or a CSR1 file when the magic matches.
EdgeList load_edge_list(const std::string& path, bool directed);

namespace detail {
void put_u64(std::ostream& out, std::uint64_t v);
std::uint64_t get_u64(std::istream& in);
}  // namespace detail

}  // namespace tricache
