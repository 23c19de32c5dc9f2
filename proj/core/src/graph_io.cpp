#include "hetgraph/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hetgraph {

namespace {

struct LineScanner {
  const char* p;
  const char* end;

  void skip_ws() {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) p++;
  }
  bool done() {
    skip_ws();
    return p == end;
  }
  bool next_u64(std::uint64_t& out) {
    skip_ws();
    auto [ptr, ec] = std::from_chars(p, end, out);
    if (ec != std::errc()) return false;
    p = ptr;
    return true;
  }
};

VertexId checked_vertex(std::uint64_t raw, const std::string& name, std::uint64_t line) {
  if (raw >= kInvalidVertex) {
    throw ParseError(name, line, "vertex id " + std::to_string(raw) + " overflows 32-bit id space");
  }
  return static_cast<VertexId>(raw);
}

void append_edge(Graph& g, VertexId src, VertexId dst, std::uint32_t w, bool undirected) {
  g.edges.push_back({src, dst, w});
  if (undirected) g.edges.push_back({dst, src, w});
}

}  // namespace

Graph parse_edge_list(std::istream& in, const std::string& name, bool undirected) {
  Graph g;
  g.directed = !undirected;
  std::uint64_t max_id = 0;
  bool any_vertex = false;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    LineScanner sc{line.data(), line.data() + line.size()};
    if (sc.done()) continue;

    std::uint64_t src_raw, dst_raw, w_raw = 1;
    if (!sc.next_u64(src_raw) || !sc.next_u64(dst_raw)) {
      throw ParseError(name, lineno, "expected 'src dst [weight]'");
    }
    bool has_weight = !sc.done();
    if (has_weight && !sc.next_u64(w_raw)) {
      throw ParseError(name, lineno, "malformed weight field");
    }
    if (!sc.done()) throw ParseError(name, lineno, "trailing characters after edge record");
    if (w_raw > 0xFFFFFFFFull) throw ParseError(name, lineno, "weight overflows 32 bits");

    VertexId src = checked_vertex(src_raw, name, lineno);
    VertexId dst = checked_vertex(dst_raw, name, lineno);
    max_id = std::max({max_id, src_raw, dst_raw});
    any_vertex = true;
    append_edge(g, src, dst, static_cast<std::uint32_t>(w_raw), undirected);
  }
  g.num_vertices = any_vertex ? static_cast<std::uint32_t>(max_id) + 1 : 0;
  finalize_graph(g);
  return g;
}

Graph parse_matrix_market(std::istream& in, const std::string& name, bool undirected) {
  std::string line;
  std::uint64_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError(name, 1, "empty MatrixMarket file");
  lineno++;
  if (line.rfind("%%MatrixMarket", 0) != 0) {
    throw ParseError(name, lineno, "missing %%MatrixMarket banner");
  }
  if (line.find("coordinate") == std::string::npos) {
    throw ParseError(name, lineno, "only coordinate format is supported");
  }
  bool symmetric = line.find("symmetric") != std::string::npos;

  // Size line after comments.
  std::uint64_t rows = 0, cols = 0, nnz = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line[0] == '%') continue;
    LineScanner sc{line.data(), line.data() + line.size()};
    if (sc.done()) continue;
    if (!sc.next_u64(rows) || !sc.next_u64(cols) || !sc.next_u64(nnz)) {
      throw ParseError(name, lineno, "expected 'rows cols nnz'");
    }
    break;
  }

  Graph g;
  g.directed = !(undirected || symmetric);
  bool both_dirs = undirected || symmetric;
  std::uint64_t max_dim = std::max(rows, cols);
  if (max_dim >= kInvalidVertex) throw ParseError(name, lineno, "dimension overflows 32-bit id space");
  g.num_vertices = static_cast<std::uint32_t>(max_dim);

  std::uint64_t seen = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line[0] == '%') continue;
    LineScanner sc{line.data(), line.data() + line.size()};
    if (sc.done()) continue;
    std::uint64_t r, c;
    if (!sc.next_u64(r) || !sc.next_u64(c)) throw ParseError(name, lineno, "expected 'row col [value]'");
    if (r == 0 || c == 0) throw ParseError(name, lineno, "MatrixMarket entries are 1-indexed");
    if (r > rows || c > cols) throw ParseError(name, lineno, "entry outside declared dimensions");
    // Optional numeric value is ignored for pattern use; integral values kept as weight.
    std::uint64_t w_raw = 1;
    if (!sc.done()) {
      double unused;
      std::string rest(sc.p, sc.end);
      std::istringstream vs(rest);
      vs >> unused;
      if (vs.fail()) throw ParseError(name, lineno, "malformed value field");
      w_raw = 1;
    }
    append_edge(g, static_cast<VertexId>(r - 1), static_cast<VertexId>(c - 1),
                static_cast<std::uint32_t>(w_raw), both_dirs);
    seen++;
  }
  if (seen != nnz) {
    throw ParseError(name, lineno, "entry count " + std::to_string(seen) +
                                       " does not match declared nnz " + std::to_string(nnz));
  }
  finalize_graph(g);
  return g;
}

Graph load_graph(const std::string& path, GraphFormat format, bool undirected) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file: " + path);
  switch (format) {
    case GraphFormat::EdgeList:
      return parse_edge_list(in, path, undirected);
    case GraphFormat::MatrixMarket:
      return parse_matrix_market(in, path, undirected);
  }
  throw Error("unknown graph format");
}

void write_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  for (const Edge& e : g.edges) {
    out << e.src << ' ' << e.dst;
    if (e.weight != 1) out << ' ' << e.weight;
    out << '\n';
  }
}

PreprocessedGraph preprocess(Graph g, std::uint32_t interval_size, bool apply_dbg) {
  PreprocessedGraph pg;
  if (apply_dbg) {
    auto [reordered, perm] = dbg_reorder(g);
    pg.graph = std::move(reordered);
    pg.perm = std::move(perm);
  } else {
    pg.graph = std::move(g);
    pg.perm = identity_permutation(pg.graph.num_vertices);
  }
  pg.interval_size = interval_size;
  pg.partitions = partition_graph(pg.graph, interval_size);
  return pg;
}

namespace {

constexpr char kMagic[4] = {'R', 'G', 'R', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  // Little-endian on all supported hosts.
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw Error("truncated binary graph file: " + path);
  return v;
}

}  // namespace

void save_binary(const PreprocessedGraph& pg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, pg.graph.num_vertices);
  put<std::uint64_t>(out, pg.graph.num_edges());
  put<std::uint32_t>(out, pg.interval_size);
  for (VertexId v : pg.perm.old_to_new) put<std::uint32_t>(out, v);
  for (const Partition& p : pg.partitions) {
    put<std::uint64_t>(out, p.num_edges());
    for (const Edge& e : p.edges) {
      put<std::uint32_t>(out, e.src);
      put<std::uint32_t>(out, e.dst);
      put<std::uint32_t>(out, e.weight);
    }
  }
  if (!out) throw Error("write failed: " + path);
}

PreprocessedGraph load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error("not a preprocessed graph file (bad magic): " + path);
  }
  std::uint32_t version = get<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw Error("unsupported graph file version " + std::to_string(version) + ": " + path);
  }
  std::uint64_t v = get<std::uint64_t>(in, path);
  std::uint64_t e = get<std::uint64_t>(in, path);
  std::uint32_t interval_size = get<std::uint32_t>(in, path);
  if (v > 0xFFFFFFFFull) throw Error("vertex count overflows 32-bit id space: " + path);
  HG_CHECK(interval_size >= 1, "invalid interval size in binary file");

  PreprocessedGraph pg;
  pg.interval_size = interval_size;
  pg.graph.num_vertices = static_cast<std::uint32_t>(v);
  pg.perm.old_to_new.resize(v);
  pg.perm.new_to_old.assign(v, 0);
  for (std::uint64_t i = 0; i < v; ++i) {
    VertexId nid = get<std::uint32_t>(in, path);
    HG_CHECK(nid < v, "permutation entry out of range");
    pg.perm.old_to_new[i] = nid;
    pg.perm.new_to_old[nid] = static_cast<VertexId>(i);
  }

  std::uint64_t num_parts = v == 0 ? 0 : (v + interval_size - 1) / interval_size;
  pg.partitions.resize(num_parts);
  std::uint64_t total = 0;
  pg.graph.edges.reserve(e);
  for (std::uint64_t i = 0; i < num_parts; ++i) {
    Partition& p = pg.partitions[i];
    p.index = static_cast<std::uint32_t>(i);
    p.vtx_lo = static_cast<VertexId>(i * interval_size);
    p.vtx_hi = static_cast<VertexId>(std::min<std::uint64_t>(v, (i + 1) * interval_size));
    std::uint64_t count = get<std::uint64_t>(in, path);
    p.edges.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
      Edge edge;
      edge.src = get<std::uint32_t>(in, path);
      edge.dst = get<std::uint32_t>(in, path);
      edge.weight = get<std::uint32_t>(in, path);
      HG_CHECK(edge.dst >= p.vtx_lo && edge.dst < p.vtx_hi, "edge outside its partition interval");
      p.edges.push_back(edge);
      pg.graph.edges.push_back(edge);
    }
    total += count;
  }
  if (total != e) throw Error("edge count mismatch in binary file: " + path);
  finalize_graph(pg.graph);
  return pg;
}

}  // namespace hetgraph
