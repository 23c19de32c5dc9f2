#include "hetgraph/udf.hpp"

namespace hetgraph {

namespace {

std::atomic<std::uint64_t> g_overflows{0};

PropValue pr_scatter(PropValue src_prop, PropValue) { return src_prop; }

PropValue pr_gather(PropValue buffered, PropValue value) {
  std::uint64_t wide = static_cast<std::uint64_t>(buffered) + value;
  if (wide > 0xFFFFFFFFull) g_overflows.fetch_add(1, std::memory_order_relaxed);
  return static_cast<PropValue>(wide);
}

PropValue pr_apply(PropValue accumulated, PropValue, std::uint32_t out_degree) {
  // rank = base + damp * accumulated; stored property is rank / out_degree.
  // The Q16 widen/divide/narrow sequence mirrors the hardware kernel.
  std::uint64_t damped = (static_cast<std::uint64_t>(kDampFixPoint) * accumulated) >> 7;
  std::uint64_t rank = kRankBase + damped;
  if (rank > 0xFFFFFFFFull) g_overflows.fetch_add(1, std::memory_order_relaxed);
  std::uint32_t deg = out_degree == 0 ? 1 : out_degree;
  std::uint64_t scaled = (rank << 16) / deg;
  return static_cast<PropValue>(scaled >> 16);
}

PropValue bfs_scatter(PropValue src_prop, PropValue) { return src_prop + 1; }

PropValue bfs_gather(PropValue buffered, PropValue value) {
  return value < buffered ? value : buffered;
}

PropValue bfs_apply(PropValue accumulated, PropValue old_prop, std::uint32_t) {
  return accumulated < old_prop ? accumulated : old_prop;
}

bool bfs_active(PropValue src_prop) { return src_prop != kBfsUnreached; }

PropValue id_scatter(PropValue src_prop, PropValue) { return src_prop; }
PropValue id_gather(PropValue buffered, PropValue value) { return buffered + value; }
PropValue id_apply(PropValue accumulated, PropValue, std::uint32_t) { return accumulated; }

}  // namespace

GasUdf pagerank_udf() { return {pr_scatter, pr_gather, pr_apply, 0, nullptr}; }

GasUdf bfs_udf() { return {bfs_scatter, bfs_gather, bfs_apply, kBfsUnreached, bfs_active}; }

GasUdf identity_udf() { return {id_scatter, id_gather, id_apply, 0, nullptr}; }

std::vector<PropValue> pagerank_initial(const Graph& g) {
  std::vector<PropValue> props(g.num_vertices);
  for (VertexId v = 0; v < g.num_vertices; ++v) {
    std::uint32_t deg = g.out_degree[v] == 0 ? 1 : g.out_degree[v];
    props[v] = kRankOne / deg;
  }
  return props;
}

std::vector<PropValue> bfs_initial(const Graph& g, VertexId root) {
  HG_CHECK(root < g.num_vertices, "bfs root out of range");
  std::vector<PropValue> props(g.num_vertices, kBfsUnreached);
  props[root] = 0;
  return props;
}

std::uint64_t overflow_guard_count() { return g_overflows.load(); }
void reset_overflow_guard() { g_overflows.store(0); }

void accumulate_closeness(std::vector<PropValue>& centrality,
                          const std::vector<PropValue>& levels) {
  HG_CHECK(centrality.size() == levels.size(), "closeness arrays must match");
  for (std::size_t v = 0; v < levels.size(); ++v) {
    PropValue d = levels[v];
    if (d != kBfsUnreached && d != 0) centrality[v] += (1u << 16) / d;
  }
}

}  // namespace hetgraph
