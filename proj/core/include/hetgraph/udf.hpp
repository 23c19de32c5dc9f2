#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "hetgraph/graph.hpp"

namespace hetgraph {

/// User-defined functions of the Gather-Apply-Scatter model. Plain function
/// pointers keep hot loops cheap and guarantee the simulator and the CPU
/// reference execute bit-identical operations.
///
/// gather must be associative and commutative on the 32-bit representation;
/// gather(identity, v) == v. `active` limits scatter to live sources (used
/// by traversal kernels); a null predicate means every edge scatters.
struct GasUdf {
  PropValue (*scatter)(PropValue src_prop, PropValue edge_prop);
  PropValue (*gather)(PropValue buffered, PropValue value);
  PropValue (*apply)(PropValue accumulated, PropValue old_prop, std::uint32_t out_degree);
  PropValue identity;
  bool (*active)(PropValue src_prop) = nullptr;

  bool is_active(PropValue src_prop) const { return active == nullptr || active(src_prop); }
};

// PageRank in 32-bit fixed point. Ranks are Q16.16 with initial rank 1.0
// per vertex; the stored property is rank / out_degree so scatter forwards
// it unchanged. Damping is Q7: kDampFixPoint / 128 ~= 0.85.
constexpr std::uint32_t kDampFixPoint = 109;
constexpr std::uint32_t kRankOne = 1u << 16;
// (1 - damp) * 1.0 in Q16.16, exact: (128 - 109) << 16 >> 7.
constexpr std::uint32_t kRankBase = ((128u - kDampFixPoint) << 16) >> 7;

GasUdf pagerank_udf();
GasUdf bfs_udf();
/// Identity kernel: scatter forwards, gather sums, apply returns the
/// accumulator. Used by tests.
GasUdf identity_udf();

constexpr PropValue kBfsUnreached = 0xFFFFFFFFu;

std::vector<PropValue> pagerank_initial(const Graph& g);
std::vector<PropValue> bfs_initial(const Graph& g, VertexId root);

/// Count of guarded 32-bit overflows in fixed-point apply since the last
/// reset. Desk-scale graphs must keep this at zero.
std::uint64_t overflow_guard_count();
void reset_overflow_guard();

/// Closeness finalization: sum over roots of (1 << 16) / distance for
/// finite nonzero distances, accumulated into `centrality`.
void accumulate_closeness(std::vector<PropValue>& centrality,
                          const std::vector<PropValue>& levels);

}  // namespace hetgraph
