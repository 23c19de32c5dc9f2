#include "hetgraph/partition.hpp"

#include <unordered_set>

namespace hetgraph {

std::vector<Partition> partition_graph(const Graph& g, std::uint32_t interval_size) {
  HG_CHECK(interval_size >= 1, "partition interval size must be >= 1");
  const std::uint64_t v = g.num_vertices;
  const std::uint64_t count = v == 0 ? 0 : (v + interval_size - 1) / interval_size;

  std::vector<Partition> parts(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    parts[i].index = static_cast<std::uint32_t>(i);
    parts[i].vtx_lo = static_cast<VertexId>(i * interval_size);
    parts[i].vtx_hi = static_cast<VertexId>(std::min(v, (i + 1) * interval_size));
  }
  // Global edge order is src-ascending; stable bucketing by dst keeps each
  // partition's slice sorted by src.
  for (const Edge& e : g.edges) {
    parts[e.dst / interval_size].edges.push_back(e);
  }
  return parts;
}

void build_windows(Partition& part, std::uint64_t window_size) {
  HG_CHECK(window_size >= 1, "window size must be >= 1");
  part.windows.clear();
  for (std::uint64_t lo = 0; lo < part.edges.size(); lo += window_size) {
    Window w;
    w.edge_lo = lo;
    w.edge_hi = std::min<std::uint64_t>(part.edges.size(), lo + window_size);
    w.first_src = part.edges[lo].src;
    w.last_src = part.edges[w.edge_hi - 1].src;
    part.windows.push_back(w);
  }
}

void build_windows(std::vector<Partition>& parts, std::uint64_t window_size) {
  for (Partition& p : parts) build_windows(p, window_size);
}

std::vector<PartitionProfile> profile_partitions(const std::vector<Partition>& parts,
                                                 const PipelineConfig& cfg,
                                                 std::uint32_t num_vertices,
                                                 std::uint64_t total_edges) {
  const std::uint32_t per_block = cfg.props_per_block();
  const std::uint64_t total_blocks =
      (static_cast<std::uint64_t>(num_vertices) + per_block - 1) / per_block;

  std::vector<PartitionProfile> profiles;
  profiles.reserve(parts.size());
  std::unordered_set<std::uint64_t> touched;
  for (const Partition& p : parts) {
    touched.clear();
    for (const Edge& e : p.edges) touched.insert(e.src / per_block);
    PartitionProfile prof;
    prof.edge_fraction =
        total_edges == 0 ? 0.0 : static_cast<double>(p.num_edges()) / static_cast<double>(total_edges);
    prof.src_touched_fraction =
        total_blocks == 0 ? 0.0 : static_cast<double>(touched.size()) / static_cast<double>(total_blocks);
    profiles.push_back(prof);
  }
  return profiles;
}

}  // namespace hetgraph
