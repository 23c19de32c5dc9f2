#pragma once

#include <cstdint>
#include <vector>

#include "hetgraph/types.hpp"

namespace hetgraph {

/// Directed graph in COO form, edges sorted by source vertex id.
/// For undirected inputs every input edge is materialized in both
/// directions before sorting, so the COO invariants are uniform.
struct Graph {
  std::uint32_t num_vertices = 0;
  bool directed = true;
  std::vector<Edge> edges;
  std::vector<std::uint32_t> in_degree;
  std::vector<std::uint32_t> out_degree;

  std::uint64_t num_edges() const { return edges.size(); }
};

struct VertexPermutation {
  std::vector<VertexId> old_to_new;
  std::vector<VertexId> new_to_old;
};

/// Recomputes degree arrays from the edge list and sorts edges by src.
/// Call after any bulk edit of `edges`.
void finalize_graph(Graph& g);

/// Groups vertices into power-of-two in-degree bands (…, >=64, >=32, …,
/// >=1, 0), bands ordered by descending threshold, original order kept
/// inside each band. Returns the relabelled graph re-sorted to COO order
/// together with the permutation that produced it.
std::pair<Graph, VertexPermutation> dbg_reorder(const Graph& g);

/// Identity permutation helper for pipelines that skip reordering.
VertexPermutation identity_permutation(std::uint32_t num_vertices);

}  // namespace hetgraph
