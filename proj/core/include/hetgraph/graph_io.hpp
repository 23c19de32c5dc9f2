#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hetgraph/graph.hpp"
#include "hetgraph/partition.hpp"

namespace hetgraph {

enum class GraphFormat { EdgeList, MatrixMarket };

/// Text loaders. Edge list: one "src dst [weight]" per line, '#' comments.
/// MatrixMarket coordinate files are 1-indexed and converted to 0-indexed;
/// the "symmetric" qualifier implies an undirected graph.
Graph load_graph(const std::string& path, GraphFormat format, bool undirected);
Graph parse_edge_list(std::istream& in, const std::string& name, bool undirected);
Graph parse_matrix_market(std::istream& in, const std::string& name, bool undirected);

void write_edge_list(const Graph& g, const std::string& path);

/// Preprocessed graph container: the reordered graph, the permutation that
/// produced it and the interval partitioning.
struct PreprocessedGraph {
  Graph graph;                // relabelled, COO order
  VertexPermutation perm;     // original id <-> relabelled id
  std::uint32_t interval_size = 0;  // U
  std::vector<Partition> partitions;
};

PreprocessedGraph preprocess(Graph g, std::uint32_t interval_size, bool apply_dbg);

/// Binary container, versioned and little-endian:
///   magic "RGRF", u32 version, u64 V, u64 E, u32 U,
///   old_to_new permutation (u32 x V),
///   per partition: u64 edge count then (src u32, dst u32, weight u32) records.
void save_binary(const PreprocessedGraph& pg, const std::string& path);
PreprocessedGraph load_binary(const std::string& path);

}  // namespace hetgraph
