#pragma once

#include <cstdint>
#include <vector>

#include "hetgraph/config.hpp"
#include "hetgraph/graph.hpp"

namespace hetgraph {

/// Fixed-size run of edges inside a partition. Cost estimation and
/// sub-partition cutting both work at this granularity.
struct Window {
  std::uint64_t edge_lo = 0;
  std::uint64_t edge_hi = 0;
  VertexId first_src = 0;
  VertexId last_src = 0;
  std::int64_t est_cycles_big = 0;
  std::int64_t est_cycles_little = 0;
};

/// Destination-vertex interval [vtx_lo, vtx_hi) plus the edges whose
/// destinations fall inside it, sorted by src.
struct Partition {
  std::uint32_t index = 0;
  VertexId vtx_lo = 0;
  VertexId vtx_hi = 0;
  std::vector<Edge> edges;
  std::vector<Window> windows;

  std::uint64_t num_edges() const { return edges.size(); }
  bool has_edges() const { return !edges.empty(); }
  std::uint32_t interval_size() const { return vtx_hi - vtx_lo; }
};

struct PartitionProfile {
  double edge_fraction = 0.0;
  double src_touched_fraction = 0.0;
};

/// Splits g into ceil(V/U) partitions; partition i owns destinations in
/// [i*U, (i+1)*U) clamped at V. Zero-edge partitions are kept.
std::vector<Partition> partition_graph(const Graph& g, std::uint32_t interval_size);

/// Tiles the partition's edge slice into windows of at most window_size
/// edges and records the boundary source ids.
void build_windows(Partition& part, std::uint64_t window_size);
void build_windows(std::vector<Partition>& parts, std::uint64_t window_size);

std::vector<PartitionProfile> profile_partitions(const std::vector<Partition>& parts,
                                                 const PipelineConfig& cfg,
                                                 std::uint32_t num_vertices,
                                                 std::uint64_t total_edges);

}  // namespace hetgraph
