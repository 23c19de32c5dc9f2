#include "hetgraph/cost_model.hpp"

#include <algorithm>

namespace hetgraph {

namespace {

constexpr std::int64_t kQ = MemoryLatencyModel::kQ;

std::int64_t ceil_q(std::int64_t q) { return (q + kQ - 1) / kQ; }

std::int64_t div_exact(std::int64_t num, std::int64_t den, const char* what) {
  HG_CHECK(num % den == 0, what);
  return num / den;
}

struct SetWalk {
  // Per-set cost state shared by partition and window estimation.
  const PipelineConfig& cfg;
  const MemoryLatencyModel& mem;
  PipelineKind kind;
  std::int64_t edge_q;
  std::int64_t proc_q;
  bool first_set = true;
  VertexId prev_last_src = 0;

  SetWalk(const PipelineConfig& c, const MemoryLatencyModel& m, PipelineKind k)
      : cfg(c), mem(m), kind(k), edge_q(edge_set_cost_q(c)), proc_q(proc_set_cost_q(c)) {}

  // Vertex-access cost of one issue set ending at last_src, in 1/kQ units.
  std::int64_t access_v_q(VertexId last_src) {
    std::int64_t v_q = 0;
    if (kind == PipelineKind::Little) {
      if (first_set) {
        // Initial half fill of the ping-pong buffer plus burst latency.
        v_q = static_cast<std::int64_t>(cfg.ppb_half_blocks()) * kQ + mem.b_q;
      } else if (last_src > prev_last_src) {
        std::int64_t stride = static_cast<std::int64_t>(last_src) - prev_last_src;
        std::int64_t per_vertex_q =
            div_exact(kQ, cfg.s_mem / cfg.s_vprop, "kQ must be divisible by props-per-block");
        v_q = stride * per_vertex_q;
      }
      // Negative strides jump: no refill charge until the read catches up.
    } else {
      const std::uint32_t per_block = cfg.props_per_block();
      std::uint64_t blk = last_src / per_block;
      std::uint64_t prev_blk = prev_last_src / per_block;
      std::uint64_t vid_dist = last_src > prev_last_src ? last_src - prev_last_src
                                                        : prev_last_src - last_src;
      if (first_set || blk != prev_blk) {
        // At least one deduplicated request; Eq.-(4)-style clamped latency
        // at the source-id stride. The first set is a cold start measured
        // from the base of the property region.
        std::uint64_t dist = first_set ? last_src : vid_dist;
        v_q = mem.latency_q(dist * cfg.prop_bytes());
      }
    }
    first_set = false;
    prev_last_src = last_src;
    return v_q;
  }
};

}  // namespace

const char* to_string(PipelineKind kind) {
  return kind == PipelineKind::Big ? "big" : "little";
}

std::int64_t store_cycles(PipelineKind kind, const PipelineConfig& cfg) {
  std::int64_t flush_q = div_exact(static_cast<std::int64_t>(cfg.s_buf) * kQ, cfg.s_ram,
                                   "s_buf must be divisible by s_ram");
  std::int64_t port_q;
  if (kind == PipelineKind::Big) {
    port_q = static_cast<std::int64_t>(cfg.s_ram) * cfg.n_gpe * kQ / cfg.s_mem;
  } else {
    port_q = static_cast<std::int64_t>(cfg.s_ram) * kQ / cfg.s_mem;
  }
  return ceil_q(std::max(flush_q, port_q));
}

std::int64_t edge_set_cost_q(const PipelineConfig& cfg) {
  std::int64_t num = static_cast<std::int64_t>(cfg.n_spe) * cfg.s_e * kQ;
  return div_exact(num, cfg.s_mem, "issue-set edge cost must be exactly representable");
}

std::int64_t proc_set_cost_q(const PipelineConfig& cfg) {
  // 1/C_proc = max(n_spe/ii_spe, n_gpe/ii_gpe); per set cost = n_spe * C_proc.
  std::uint64_t lhs = static_cast<std::uint64_t>(cfg.n_spe) * cfg.ii_gpe;
  std::uint64_t rhs = static_cast<std::uint64_t>(cfg.n_gpe) * cfg.ii_spe;
  std::int64_t num, den;
  if (lhs >= rhs) {  // scatter side dominates the rate
    num = static_cast<std::int64_t>(cfg.ii_spe) * cfg.n_spe * kQ;
    den = cfg.n_spe;
  } else {
    num = static_cast<std::int64_t>(cfg.ii_gpe) * cfg.n_spe * kQ;
    den = cfg.n_gpe;
  }
  return div_exact(num, den, "issue-set processing cost must be exactly representable");
}

CycleEstimate estimate_partition(const Partition& part, PipelineKind kind,
                                 const PipelineConfig& cfg, const MemoryLatencyModel& mem) {
  cfg.validate();
  CycleEstimate est;
  est.kind = kind;
  est.store = store_cycles(kind, cfg);
  est.const_overhead = cfg.c_const;

  if (part.edges.empty()) {
    est.total = est.store + est.const_overhead;
    return est;
  }

  SetWalk walk(cfg, mem, kind);
  std::int64_t sum_max_q = 0, sum_v_q = 0, sum_e_q = 0, sum_p_q = 0;
  const std::uint64_t n = part.edges.size();
  for (std::uint64_t lo = 0; lo < n; lo += cfg.n_spe) {
    std::uint64_t hi = std::min<std::uint64_t>(n, lo + cfg.n_spe);
    std::int64_t v_q = walk.access_v_q(part.edges[hi - 1].src);
    sum_max_q += std::max({v_q, walk.edge_q, walk.proc_q});
    sum_v_q += v_q;
    sum_e_q += walk.edge_q;
    sum_p_q += walk.proc_q;
  }
  est.sum_max = ceil_q(sum_max_q);
  est.access_v = ceil_q(sum_v_q);
  est.access_e = ceil_q(sum_e_q);
  est.proc = ceil_q(sum_p_q);
  est.total = est.sum_max + est.store + est.const_overhead;
  return est;
}

void estimate_windows(Partition& part, const PipelineConfig& cfg, const MemoryLatencyModel& mem) {
  for (int k = 0; k < 2; ++k) {
    PipelineKind kind = k == 0 ? PipelineKind::Big : PipelineKind::Little;
    SetWalk walk(cfg, mem, kind);
    std::int64_t prefix_q = 0;
    std::int64_t prev_ceil = 0;
    std::size_t w = 0;
    const std::uint64_t n = part.edges.size();
    for (std::uint64_t lo = 0; lo < n; lo += cfg.n_spe) {
      std::uint64_t hi = std::min<std::uint64_t>(n, lo + cfg.n_spe);
      // A set belongs to the window holding its first edge.
      while (w + 1 < part.windows.size() && lo >= part.windows[w].edge_hi) {
        std::int64_t c = ceil_q(prefix_q);
        (kind == PipelineKind::Big ? part.windows[w].est_cycles_big
                                   : part.windows[w].est_cycles_little) = c - prev_ceil;
        prev_ceil = c;
        ++w;
      }
      std::int64_t v_q = walk.access_v_q(part.edges[hi - 1].src);
      prefix_q += std::max({v_q, walk.edge_q, walk.proc_q});
    }
    // Remaining windows (the last one, plus any empty tail).
    for (; w < part.windows.size(); ++w) {
      std::int64_t c = ceil_q(prefix_q);
      (kind == PipelineKind::Big ? part.windows[w].est_cycles_big
                                 : part.windows[w].est_cycles_little) = c - prev_ceil;
      prev_ceil = c;
    }
  }
}

void estimate_windows(std::vector<Partition>& parts, const PipelineConfig& cfg,
                      const MemoryLatencyModel& mem) {
  for (Partition& p : parts) estimate_windows(p, cfg, mem);
}

}  // namespace hetgraph
