#include "tricache/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tricache/errors.hpp"
#include "tricache/random.hpp"

namespace tricache {

CsrGraph::CsrGraph(bool directed, std::vector<EdgeIndex> offsets, std::vector<VertexId> adjacencies)
    : directed_(directed), offsets_(std::move(offsets)), adjacencies_(std::move(adjacencies)) {
  if (offsets_.empty()) throw std::invalid_argument("CsrGraph: offsets must have n+1 entries");
}

EdgeIndex CsrGraph::degree(VertexId v) const {
  if (v >= n()) throw std::out_of_range("degree: vertex " + std::to_string(v) + " >= n");
  return offsets_[v + 1] - offsets_[v];
}

std::span<const VertexId> CsrGraph::adjacency(VertexId v) const {
  if (v >= n()) throw std::out_of_range("adjacency: vertex " + std::to_string(v) + " >= n");
  return std::span<const VertexId>(adjacencies_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::vector<std::string> validate(const CsrGraph& g) {
  std::vector<std::string> out;
  const auto off = g.offsets();
  const auto adj = g.adjacencies();
  const VertexId n = off.size() - 1;

  if (off[0] != 0) out.push_back("offsets[0] != 0 @0");
  if (off[n] != adj.size()) out.push_back("offsets[n] != m @" + std::to_string(n));
  for (VertexId i = 1; i <= n; ++i) {
    if (off[i] < off[i - 1]) {
      out.push_back("offsets non-monotone @" + std::to_string(i));
      return out;  // slices are meaningless past this point
    }
  }
  if (off[n] > adj.size()) return out;

  std::string unsorted, range;
  for (VertexId v = 0; v < n; ++v) {
    for (EdgeIndex e = off[v]; e < off[v + 1]; ++e) {
      if (range.empty() && adj[e] >= n) range = "adjacency out of range @" + std::to_string(v);
      if (unsorted.empty() && e > off[v] && adj[e] <= adj[e - 1])
        unsorted = "slice unsorted @" + std::to_string(v);
    }
  }
  if (!unsorted.empty()) out.push_back(unsorted);
  if (!range.empty()) out.push_back(range);

  if (!g.directed() && unsorted.empty() && range.empty()) {
    for (VertexId v = 0; v < n; ++v) {
      for (EdgeIndex e = off[v]; e < off[v + 1]; ++e) {
        const VertexId u = adj[e];
        const auto back = adj.subspan(off[u], off[u + 1] - off[u]);
        if (!std::binary_search(back.begin(), back.end(), v)) {
          out.push_back("asymmetric edge @" + std::to_string(v));
          return out;
        }
      }
    }
  }
  return out;
}

RelabelMap::RelabelMap(std::vector<VertexId> original_ids, std::vector<VertexId> forward)
    : original_ids_(std::move(original_ids)), forward_(std::move(forward)) {
  VertexId dense = 0;
  for (VertexId f : forward_)
    if (f != kNoVertex) dense = std::max(dense, f + 1);
  inverse_.assign(dense, kNoVertex);
  for (std::size_t i = 0; i < forward_.size(); ++i)
    if (forward_[i] != kNoVertex) inverse_[forward_[i]] = original_ids_[i];
}

VertexId RelabelMap::forward(VertexId original) const {
  auto it = std::lower_bound(original_ids_.begin(), original_ids_.end(), original);
  if (it == original_ids_.end() || *it != original) return kNoVertex;
  return forward_[it - original_ids_.begin()];
}

bool RelabelMap::removed(VertexId original) const {
  auto it = std::lower_bound(original_ids_.begin(), original_ids_.end(), original);
  return it != original_ids_.end() && *it == original && forward_[it - original_ids_.begin()] == kNoVertex;
}

std::vector<VertexId> RelabelMap::removed_ids() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < forward_.size(); ++i)
    if (forward_[i] == kNoVertex) out.push_back(original_ids_[i]);
  return out;
}

namespace {

bool parse_id(std::string_view tok, VertexId& out) {
  if (tok.empty() || tok.front() == '-' || tok.front() == '+') return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

// Splits on blanks/tabs/CR; returns the number of tokens found (max 3 stored).
std::size_t tokenize(std::string_view line, std::string_view (&tok)[3]) {
  std::size_t count = 0, i = 0;
  auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && blank(line[i])) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !blank(line[j])) ++j;
    if (count < 3) tok[count] = line.substr(i, j - i);
    ++count;
    i = j;
  }
  return count;
}

// Builds adjacency from unique pairs. With `symmetric`, each pair (u,v) also
// contributes (v,u).
CsrGraph build_csr(bool directed, VertexId n, std::span<const Edge> pairs, bool symmetric) {
  std::vector<EdgeIndex> offsets(n + 1, 0);
  for (const Edge& e : pairs) {
    ++offsets[e.src + 1];
    if (symmetric) ++offsets[e.dst + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<VertexId> adj(offsets[n]);
  std::vector<EdgeIndex> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : pairs) {
    adj[cursor[e.src]++] = e.dst;
    if (symmetric) adj[cursor[e.dst]++] = e.src;
  }
  for (VertexId v = 0; v < n; ++v) std::sort(adj.begin() + offsets[v], adj.begin() + offsets[v + 1]);
  return CsrGraph(directed, std::move(offsets), std::move(adj));
}

}  // namespace

EdgeList parse_edge_list(std::istream& in, bool directed) {
  EdgeList el;
  el.directed = directed;
  std::string line;
  std::size_t lineno = 0;
  bool any = false;
  VertexId max_id = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view tok[3];
    const std::size_t count = tokenize(line, tok);
    if (count == 0) continue;
    if (tok[0].front() == '#') continue;
    if (count != 2) throw ParseError(lineno, "expected two vertex ids");
    Edge e;
    if (!parse_id(tok[0], e.src) || !parse_id(tok[1], e.dst))
      throw ParseError(lineno, "invalid vertex id");
    max_id = std::max({max_id, e.src, e.dst});
    any = true;
    el.edges.push_back(e);
  }
  if (any) {
    if (max_id == kNoVertex) throw ParseError(lineno, "vertex id too large");
    el.n_hint = max_id + 1;
  }
  return el;
}

EdgeList parse_edge_list(const std::string& text, bool directed) {
  std::istringstream in(text);
  return parse_edge_list(in, directed);
}

Preprocessed preprocess(const EdgeList& el, const PreprocessOptions& opts) {
  // Compact input ids to 0..k-1 in ascending order.
  std::vector<VertexId> ids;
  std::vector<Edge> pairs(el.edges.size());
  VertexId max_id = 0;
  for (const Edge& e : el.edges) max_id = std::max({max_id, e.src, e.dst});
  const bool dense_ids = !el.edges.empty() && max_id < 4 * el.edges.size() + 16;
  if (dense_ids) {
    std::vector<VertexId> index(max_id + 1, kNoVertex);
    for (const Edge& e : el.edges) index[e.src] = index[e.dst] = 0;
    for (VertexId v = 0; v <= max_id; ++v)
      if (index[v] == 0) {
        index[v] = ids.size();
        ids.push_back(v);
      }
    for (std::size_t i = 0; i < pairs.size(); ++i)
      pairs[i] = {index[el.edges[i].src], index[el.edges[i].dst]};
  } else {
    ids.reserve(2 * el.edges.size());
    for (const Edge& e : el.edges) {
      ids.push_back(e.src);
      ids.push_back(e.dst);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto compact = [&](VertexId v) -> VertexId {
      return std::lower_bound(ids.begin(), ids.end(), v) - ids.begin();
    };
    for (std::size_t i = 0; i < pairs.size(); ++i)
      pairs[i] = {compact(el.edges[i].src), compact(el.edges[i].dst)};
  }
  const VertexId k = ids.size();

  // Loops and duplicates. Undirected pairs are normalized to src < dst.
  std::erase_if(pairs, [](const Edge& e) { return e.src == e.dst; });
  if (!el.directed)
    for (Edge& e : pairs)
      if (e.src > e.dst) std::swap(e.src, e.dst);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  // Degree < 2 removal: total degree for directed graphs, plain degree otherwise.
  std::vector<std::uint64_t> deg(k);
  std::vector<char> alive(k, 1);
  for (;;) {
    std::fill(deg.begin(), deg.end(), 0);
    for (const Edge& e : pairs) {
      ++deg[e.src];
      ++deg[e.dst];
    }
    bool changed = false;
    for (VertexId v = 0; v < k; ++v)
      if (alive[v] && deg[v] < 2) {
        alive[v] = 0;
        changed = true;
      }
    if (changed) std::erase_if(pairs, [&](const Edge& e) { return !alive[e.src] || !alive[e.dst]; });
    if (!changed || !opts.fixpoint) break;
  }
  // Survivors that lost every edge in the pass are dropped as well.
  std::fill(alive.begin(), alive.end(), 0);
  for (const Edge& e : pairs) alive[e.src] = alive[e.dst] = 1;

  std::vector<VertexId> survivors;
  for (VertexId v = 0; v < k; ++v)
    if (alive[v]) survivors.push_back(v);
  std::vector<VertexId> dense_label(survivors.size());
  std::iota(dense_label.begin(), dense_label.end(), VertexId{0});
  if (opts.relabel) {
    Rng rng(opts.seed);
    fisher_yates(std::span<VertexId>(dense_label), rng);
  }
  std::vector<VertexId> forward(k, kNoVertex);
  for (std::size_t i = 0; i < survivors.size(); ++i) forward[survivors[i]] = dense_label[i];
  for (Edge& e : pairs) e = {forward[e.src], forward[e.dst]};

  Preprocessed out;
  out.graph = build_csr(el.directed, survivors.size(), pairs, !el.directed);
  out.relabel = RelabelMap(std::move(ids), std::move(forward));
  return out;
}

EdgeList to_edge_list(const CsrGraph& g) {
  EdgeList el;
  el.directed = g.directed();
  el.n_hint = g.n();
  el.edges.reserve(g.m());
  for (VertexId v = 0; v < g.n(); ++v)
    for (VertexId u : g.adjacency(v)) el.edges.push_back({v, u});
  return el;
}

CsrGraph csr_from_clean_edges(bool directed, VertexId n, std::vector<Edge> edges) {
  for (const Edge& e : edges)
    if (e.src >= n || e.dst >= n) throw std::out_of_range("csr_from_clean_edges: vertex id >= n");
  return build_csr(directed, n, edges, false);
}

}  // namespace tricache

namespace tricache {

std::vector<VertexId> random_permutation(VertexId n, std::uint64_t seed) {
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), VertexId{0});
  Rng rng(seed);
  fisher_yates(std::span<VertexId>(perm), rng);
  return perm;
}

CsrGraph permute(const CsrGraph& g, std::span<const VertexId> perm) {
  if (perm.size() != g.n()) throw std::invalid_argument("permute: permutation size != n");
  std::vector<char> hit(g.n(), 0);
  for (VertexId x : perm) {
    if (x >= g.n() || hit[x]) throw std::invalid_argument("permute: not a permutation");
    hit[x] = 1;
  }
  std::vector<EdgeIndex> offsets(g.n() + 1, 0);
  for (VertexId v = 0; v < g.n(); ++v) offsets[perm[v] + 1] = g.degree(v);
  for (VertexId v = 0; v < g.n(); ++v) offsets[v + 1] += offsets[v];
  std::vector<VertexId> adj(g.m());
  for (VertexId v = 0; v < g.n(); ++v) {
    auto out = adj.begin() + static_cast<std::ptrdiff_t>(offsets[perm[v]]);
    auto first = out;
    for (VertexId u : g.adjacency(v)) *out++ = perm[u];
    std::sort(first, out);
  }
  return CsrGraph(g.directed(), std::move(offsets), std::move(adj));
}

}  // namespace tricache
