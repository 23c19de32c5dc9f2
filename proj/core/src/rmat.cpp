#include "hetgraph/rmat.hpp"

#include <random>

namespace hetgraph {

Graph generate_rmat(const RmatParams& params) {
  HG_CHECK(params.scale >= 1 && params.scale <= 30, "rmat scale out of range");
  const std::uint64_t v = 1ull << params.scale;
  const std::uint64_t e = v * params.edge_factor;

  std::mt19937_64 rng(params.seed);
  Graph g;
  g.num_vertices = static_cast<std::uint32_t>(v);
  g.directed = true;
  g.edges.reserve(e);

  // Quadrant pick per bit level; thresholds in 1/10000 of the unit square.
  constexpr std::uint64_t kA = 5700, kB = 7600, kC = 9500;
  for (std::uint64_t i = 0; i < e; ++i) {
    std::uint64_t src = 0, dst = 0;
    for (std::uint32_t level = 0; level < params.scale; ++level) {
      std::uint64_t r = rng() % 10000;
      src <<= 1;
      dst <<= 1;
      if (r < kA) {
        // top-left quadrant, bits stay zero
      } else if (r < kB) {
        dst |= 1;
      } else if (r < kC) {
        src |= 1;
      } else {
        src |= 1;
        dst |= 1;
      }
    }
    g.edges.push_back({static_cast<VertexId>(src), static_cast<VertexId>(dst), 1});
  }
  finalize_graph(g);
  return g;
}

}  // namespace hetgraph
