#pragma once

#include <cstdint>

#include "hetgraph/graph.hpp"

namespace hetgraph {

/// Recursive-matrix (Kronecker) generator with Graph500 quadrant weights
/// A=0.57, B=0.19, C=0.19, D=0.05. Produces 2^scale vertices and
/// edge_factor * 2^scale directed edges; duplicates and self-loops are kept.
/// Fully deterministic for a given seed.
struct RmatParams {
  std::uint32_t scale = 14;
  std::uint32_t edge_factor = 16;
  std::uint64_t seed = 1;
};

Graph generate_rmat(const RmatParams& params);

}  // namespace hetgraph
