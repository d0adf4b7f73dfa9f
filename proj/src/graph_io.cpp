#include "tricache/graph_io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "tricache/errors.hpp"

namespace tricache {

namespace detail {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw FormatError("truncated u64");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

}  // namespace detail

void write_edge_list(std::ostream& out, const EdgeList& el) {
  for (const Edge& e : el.edges) out << e.src << ' ' << e.dst << '\n';
}

void write_csr(std::ostream& out, const CsrGraph& g) {
  out.write("CSR1", 4);
  out.put(g.directed() ? 1 : 0);
  detail::put_u64(out, g.n());
  detail::put_u64(out, g.m());
  for (EdgeIndex o : g.offsets()) detail::put_u64(out, o);
  for (VertexId v : g.adjacencies()) detail::put_u64(out, v);
}

CsrGraph read_csr(std::istream& in, bool global_ids) {
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != "CSR1") throw FormatError("bad CSR1 magic");
  const int directed = in.get();
  if (directed != 0 && directed != 1) throw FormatError("bad CSR1 directed flag");
  const std::uint64_t n = detail::get_u64(in);
  const std::uint64_t m = detail::get_u64(in);
  if (n > (std::uint64_t{1} << 40) || m > (std::uint64_t{1} << 40)) throw FormatError("CSR1 header too large");
  std::vector<EdgeIndex> offsets(n + 1);
  for (auto& o : offsets) o = detail::get_u64(in);
  std::vector<VertexId> adj(m);
  for (auto& a : adj) a = detail::get_u64(in);
  CsrGraph g(directed == 1, std::move(offsets), std::move(adj));
  for (const std::string& bad : validate(g)) {
    if (global_ids && (bad.starts_with("adjacency out of range") || bad.starts_with("asymmetric"))) continue;
    throw FormatError("invalid CSR1 contents: " + bad);
  }
  return g;
}

void save_csr(const std::string& path, const CsrGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csr(out, g);
  if (!out) throw std::runtime_error("write failed: " + path);
}

CsrGraph load_csr(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csr(in);
}

EdgeList load_edge_list(const std::string& path, bool directed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  const bool is_csr = in.gcount() == 4 && std::string_view(magic, 4) == "CSR1";
  in.clear();
  in.seekg(0);
  if (!is_csr) return parse_edge_list(in, directed);
  EdgeList el = to_edge_list(read_csr(in));
  return el;
}

}  // namespace tricache
