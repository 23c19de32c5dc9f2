#include "hetgraph/kernels.hpp"

#include <deque>

namespace hetgraph {

App app_from_name(const std::string& name) {
  if (name == "pr" || name == "pagerank") return App::PageRank;
  if (name == "bfs") return App::Bfs;
  if (name == "cc" || name == "closeness") return App::Closeness;
  throw Error("unknown application '" + name + "' (expected pr, bfs or cc)");
}

const char* to_string(App app) {
  switch (app) {
    case App::PageRank: return "pr";
    case App::Bfs: return "bfs";
    case App::Closeness: return "cc";
  }
  return "?";
}

std::vector<VertexId> default_cc_roots(std::uint32_t num_vertices) {
  std::vector<VertexId> roots;
  for (VertexId v = 0; v < num_vertices && v < 8; ++v) roots.push_back(v);
  return roots;
}

GasUdf udf_for(App app) {
  switch (app) {
    case App::PageRank: return pagerank_udf();
    case App::Bfs:
    case App::Closeness: return bfs_udf();
  }
  throw Error("unknown app");
}

std::vector<PropValue> oracle_iteration(const Graph& g, const GasUdf& udf,
                                        const std::vector<PropValue>& props) {
  HG_CHECK(props.size() == g.num_vertices, "property array size mismatch");
  std::vector<PropValue> acc(g.num_vertices, udf.identity);
  for (const Edge& e : g.edges) {
    if (!udf.is_active(props[e.src])) continue;
    acc[e.dst] = udf.gather(acc[e.dst], udf.scatter(props[e.src], e.weight));
  }
  std::vector<PropValue> out(g.num_vertices);
  for (VertexId v = 0; v < g.num_vertices; ++v) {
    out[v] = udf.apply(acc[v], props[v], g.out_degree[v]);
  }
  return out;
}

std::vector<PropValue> oracle_run(const Graph& g, const GasUdf& udf,
                                  std::vector<PropValue> props, std::uint32_t max_iterations) {
  for (std::uint32_t it = 0; it < max_iterations; ++it) {
    std::vector<PropValue> next = oracle_iteration(g, udf, props);
    bool changed = next != props;
    props = std::move(next);
    if (!changed) break;
  }
  return props;
}

std::vector<PropValue> oracle_app(const Graph& g, const AppOptions& opts) {
  switch (opts.app) {
    case App::PageRank:
      return oracle_run(g, pagerank_udf(), pagerank_initial(g), opts.pr_iterations);
    case App::Bfs:
      return oracle_run(g, bfs_udf(), bfs_initial(g, opts.bfs_root), g.num_vertices + 1);
    case App::Closeness: {
      std::vector<VertexId> roots =
          opts.cc_roots.empty() ? default_cc_roots(g.num_vertices) : opts.cc_roots;
      std::vector<PropValue> centrality(g.num_vertices, 0);
      for (VertexId root : roots) {
        std::vector<PropValue> levels =
            oracle_run(g, bfs_udf(), bfs_initial(g, root), g.num_vertices + 1);
        accumulate_closeness(centrality, levels);
      }
      return centrality;
    }
  }
  throw Error("unknown app");
}

std::vector<PropValue> reference_bfs_levels(const Graph& g, VertexId root) {
  HG_CHECK(root < g.num_vertices, "bfs root out of range");
  // Adjacency built on the fly; this stays independent of the GAS path.
  std::vector<std::uint64_t> offsets(g.num_vertices + 1, 0);
  for (const Edge& e : g.edges) offsets[e.src + 1]++;
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  std::vector<VertexId> adj(g.edges.size());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : g.edges) adj[cursor[e.src]++] = e.dst;

  std::vector<PropValue> level(g.num_vertices, kBfsUnreached);
  level[root] = 0;
  std::deque<VertexId> queue{root};
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    for (std::uint64_t i = offsets[u]; i < offsets[u + 1]; ++i) {
      VertexId w = adj[i];
      if (level[w] == kBfsUnreached) {
        level[w] = level[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return level;
}

SimAppResult sim_run(const std::vector<Partition>& parts, const Graph& g,
                     const SchedulePlan& plan, const Config& config, const GasUdf& udf,
                     std::vector<PropValue> props, std::uint32_t max_iterations,
                     const SimParams& sim) {
  SimAppResult res;
  for (std::uint32_t it = 0; it < max_iterations; ++it) {
    IterationResult iter =
        run_iteration(parts, plan, props, g.out_degree, config, udf, sim);
    res.iterations++;
    res.total_makespan += iter.makespan;
    bool changed = iter.props != props;
    props = std::move(iter.props);
    res.last_traces = std::move(iter.traces);
    res.edge_channels = std::move(iter.edge_channels);
    res.prop_channels = std::move(iter.prop_channels);
    if (!changed) break;
  }
  res.props = std::move(props);
  return res;
}

SimAppResult sim_app(const std::vector<Partition>& parts, const Graph& g,
                     const SchedulePlan& plan, const Config& config, const AppOptions& opts,
                     const SimParams& sim) {
  switch (opts.app) {
    case App::PageRank:
      return sim_run(parts, g, plan, config, pagerank_udf(), pagerank_initial(g),
                     opts.pr_iterations, sim);
    case App::Bfs:
      return sim_run(parts, g, plan, config, bfs_udf(), bfs_initial(g, opts.bfs_root),
                     g.num_vertices + 1, sim);
    case App::Closeness: {
      std::vector<VertexId> roots =
          opts.cc_roots.empty() ? default_cc_roots(g.num_vertices) : opts.cc_roots;
      SimAppResult total;
      std::vector<PropValue> centrality(g.num_vertices, 0);
      for (VertexId root : roots) {
        SimAppResult pass = sim_run(parts, g, plan, config, bfs_udf(), bfs_initial(g, root),
                                    g.num_vertices + 1, sim);
        accumulate_closeness(centrality, pass.props);
        total.iterations += pass.iterations;
        total.total_makespan += pass.total_makespan;
        total.last_traces = std::move(pass.last_traces);
        total.edge_channels = std::move(pass.edge_channels);
        total.prop_channels = std::move(pass.prop_channels);
      }
      total.props = std::move(centrality);
      return total;
    }
  }
  throw Error("unknown app");
}

}  // namespace hetgraph
