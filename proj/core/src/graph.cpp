#include "hetgraph/graph.hpp"

#include <algorithm>
#include <numeric>

namespace hetgraph {

void finalize_graph(Graph& g) {
  for (const Edge& e : g.edges) {
    HG_CHECK(e.src < g.num_vertices && e.dst < g.num_vertices,
             "edge endpoint out of range");
  }
  std::stable_sort(g.edges.begin(), g.edges.end(),
                   [](const Edge& a, const Edge& b) { return a.src < b.src; });
  g.in_degree.assign(g.num_vertices, 0);
  g.out_degree.assign(g.num_vertices, 0);
  for (const Edge& e : g.edges) {
    g.out_degree[e.src]++;
    g.in_degree[e.dst]++;
  }
}

VertexPermutation identity_permutation(std::uint32_t num_vertices) {
  VertexPermutation p;
  p.old_to_new.resize(num_vertices);
  std::iota(p.old_to_new.begin(), p.old_to_new.end(), 0);
  p.new_to_old = p.old_to_new;
  return p;
}

std::pair<Graph, VertexPermutation> dbg_reorder(const Graph& g) {
  const std::uint32_t v = g.num_vertices;
  // 33 bands: in-degree in [2^31, ...), ..., [2, 4), [1, 2), and {0} last.
  std::vector<std::vector<VertexId>> buckets(33);
  for (VertexId id = 0; id < v; ++id) {
    std::uint32_t deg = g.in_degree[id];
    int band;
    if (deg == 0) {
      band = 32;
    } else {
      int msb = 31;
      while (!(deg & (1u << msb))) msb--;
      band = 31 - msb;
    }
    buckets[band].push_back(id);
  }

  VertexPermutation perm;
  perm.old_to_new.assign(v, 0);
  perm.new_to_old.reserve(v);
  for (const auto& bucket : buckets) {
    for (VertexId old_id : bucket) {
      perm.old_to_new[old_id] = static_cast<VertexId>(perm.new_to_old.size());
      perm.new_to_old.push_back(old_id);
    }
  }

  Graph out;
  out.num_vertices = v;
  out.directed = g.directed;
  out.edges.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    out.edges.push_back({perm.old_to_new[e.src], perm.old_to_new[e.dst], e.weight});
  }
  finalize_graph(out);
  return {std::move(out), std::move(perm)};
}

}  // namespace hetgraph
