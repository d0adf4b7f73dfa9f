#include "tricache/rmat.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tricache/errors.hpp"
#include "tricache/random.hpp"

namespace tricache {

namespace {
constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
}

void check(const RmatParams& p) {
  if (p.scale < 1) throw std::invalid_argument("rmat: scale must be >= 1");
  if (p.edge_factor < 1) throw std::invalid_argument("rmat: edge factor must be >= 1");
  for (double q : {p.a, p.b, p.c, p.d})
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("rmat: probabilities must lie in [0,1]");
  if (std::abs(p.a + p.b + p.c + p.d - 1.0) > 1e-9) throw std::invalid_argument("rmat: a+b+c+d must equal 1");
  if (p.scale >= 63) throw CapacityError("rmat: scale exceeds the 64-bit vertex space");
  const std::uint64_t max_edges = std::vector<Edge>().max_size();
  if (p.edge_factor > (max_edges >> p.scale)) throw CapacityError("rmat: edge count exceeds addressable memory");
}

EdgeList generate_rmat(const RmatParams& p) {
  check(p);
  const std::uint64_t total = p.edge_factor << p.scale;
  const double ab = p.a + p.b;
  const double abc = ab + p.c;

  EdgeList el;
  el.directed = p.directed;
  el.n_hint = std::uint64_t{1} << p.scale;
  el.edges.resize(total);

  // Each chunk draws from its own counter-derived stream, so chunks are
  // independent of each other and of evaluation order.
  for (std::uint64_t base = 0; base < total; base += kChunk) {
    Rng rng(mix64(p.seed ^ mix64(base / kChunk)));
    const std::uint64_t end = std::min(total, base + kChunk);
    for (std::uint64_t i = base; i < end; ++i) {
      VertexId src = 0, dst = 0;
      for (unsigned level = 0; level < p.scale; ++level) {
        const double r = uniform01(rng);
        src <<= 1;
        dst <<= 1;
        if (r < p.a) {
        } else if (r < ab) {
          dst |= 1;
        } else if (r < abc) {
          src |= 1;
        } else {
          src |= 1;
          dst |= 1;
        }
      }
      el.edges[i] = {src, dst};
    }
  }
  return el;
}

}  // namespace tricache
