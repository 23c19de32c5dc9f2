#include <algorithm>
#include <cstring>

#include "hetgraph/sim.hpp"

namespace hetgraph {

namespace {

constexpr std::int64_t kQ = MemoryLatencyModel::kQ;

PropValue decode_prop(std::span<const std::byte> region, std::uint64_t byte_off) {
  PropValue v;
  std::memcpy(&v, region.data() + byte_off, sizeof(v));
  return v;
}

}  // namespace

TaskResult run_little(const MemberSlice& slice, const PipelineConfig& cfg,
                      PipelineChannels& ch, const GasUdf& udf, const SimParams& sim) {
  const Partition& part = *slice.part;
  HG_CHECK(slice.edge_hi <= part.edges.size(), "slice beyond partition edges");
  HG_CHECK(part.interval_size() <= cfg.buffered_vertices(),
           "partition interval exceeds gather buffer capacity");

  TaskResult res;
  res.trace.kind = PipelineKind::Little;

  const std::uint32_t n_gpe = cfg.n_gpe;
  const std::uint32_t interval = part.interval_size();
  std::vector<std::vector<PropValue>> bufs(n_gpe,
                                           std::vector<PropValue>(interval, udf.identity));

  const std::uint64_t num_edges = slice.edge_hi - slice.edge_lo;
  const std::int64_t b_int = cycles_from_q(ch.props.latency().b_q);
  const std::uint64_t half_props = cfg.ppb_half_props();
  const std::uint64_t half_blocks = cfg.ppb_half_blocks();
  const std::uint32_t per_block = cfg.props_per_block();

  std::int64_t cycle = 0;
  std::uint64_t fetched_blocks = 0, skipped_blocks = 0, burst_runs = 0;
  std::int64_t warmup_stall = 0, fill_stall = 0;

  if (num_edges > 0) {
    cycle = b_int;  // edge burst startup

    // Functional property source; the buffer state machine below only
    // produces timing. Filling starts at the base of the property region.
    std::uint64_t max_src = 0;
    for (std::uint64_t i = slice.edge_lo; i < slice.edge_hi; ++i) {
      max_src = std::max<std::uint64_t>(max_src, part.edges[i].src);
    }
    const std::uint64_t prop_blocks = max_src / per_block + 1;
    std::span<const std::byte> region = ch.props.data_view(0, prop_blocks);

    std::uint64_t wid = 0;       // completed halves
    std::uint64_t fill_pos = 0;  // blocks landed in the half being filled
    std::uint64_t rid = 0;       // half required by the current issue set
    std::int64_t fill_clock = b_int;  // cycle the next fill block lands on
    burst_runs = 1;
    bool first_read = true;

    auto advance_fill = [&](std::int64_t until) {
      while (fill_clock <= until && wid <= rid + 1) {
        fill_clock++;
        fill_pos++;
        fetched_blocks++;
        if (fill_pos == half_blocks) {
          wid++;
          fill_pos = 0;
          if (wid > rid + 1) break;  // both halves resident, filling pauses
        }
      }
    };

    for (std::uint64_t lo = slice.edge_lo; lo < slice.edge_hi; lo += cfg.n_spe) {
      std::uint64_t hi = std::min(slice.edge_hi, lo + cfg.n_spe);
      VertexId last_src = part.edges[hi - 1].src;
      std::uint64_t r = last_src / half_props;

      advance_fill(cycle);  // fills that ran while previous sets issued
      if (r > wid) {
        // Jump access: the read stream passed the filling half entirely;
        // skipped blocks are never fetched.
        skipped_blocks += (r - wid) * half_blocks - fill_pos;
        wid = r;
        fill_pos = 0;
        fill_clock = cycle + 1 + b_int;  // fresh burst
        burst_runs++;
      }
      rid = r;
      fill_clock = std::max(fill_clock, cycle + 1);
      if (wid <= r) {
        // Reads wait until the required half is completely written.
        HG_CHECK(wid == r, "ping-pong fill fell behind the read round");
        std::uint64_t need = half_blocks - fill_pos;
        std::int64_t done = fill_clock + static_cast<std::int64_t>(need) - 1;
        fetched_blocks += need;
        (first_read ? warmup_stall : fill_stall) += done - cycle;
        cycle = done;
        wid = r + 1;
        fill_pos = 0;
        fill_clock = done + 1;
      }
      HG_CHECK(rid < wid, "ping-pong read before fill");
      first_read = false;
      cycle += 1;  // issue the set

      for (std::uint64_t i = lo; i < hi; ++i) {
        const Edge& e = part.edges[i];
        std::uint64_t off = static_cast<std::uint64_t>(e.src) * cfg.prop_bytes();
        PropValue src_prop = decode_prop(region, off);
        if (!udf.is_active(src_prop)) continue;
        PropValue value = udf.scatter(src_prop, e.weight);
        std::uint32_t pe = static_cast<std::uint32_t>((i - slice.edge_lo) % n_gpe);
        PropValue& cell = bufs[pe][e.dst - part.vtx_lo];
        cell = udf.gather(cell, value);
      }
    }

    // Channel accounting: edge stream plus property refills.
    std::uint64_t edge_blocks =
        (num_edges * cfg.s_e + cfg.s_mem - 1) / cfg.s_mem;
    ch.edges.record_stream(edge_blocks,
                           ch.edges.latency().b_q + static_cast<std::int64_t>(edge_blocks) * kQ);
    ch.props.record_stream(fetched_blocks,
                           static_cast<std::int64_t>(fetched_blocks) * kQ +
                               static_cast<std::int64_t>(burst_runs) * ch.props.latency().b_q);
    res.trace.mem_requests = fetched_blocks + edge_blocks;
  }

  // Merger folds the replicated buffers, then the result is written out.
  res.output.vtx_lo = part.vtx_lo;
  res.output.vtx_hi = part.vtx_hi;
  res.output.values.assign(interval, udf.identity);
  for (std::uint32_t pe = 0; pe < n_gpe; ++pe) {
    for (std::uint32_t v = 0; v < interval; ++v) {
      res.output.values[v] = udf.gather(res.output.values[v], bufs[pe][v]);
    }
  }

  cycle += store_cycles(PipelineKind::Little, cfg);
  cycle += sim.switch_overhead;

  res.trace.cycles_total = cycle;
  res.trace.edges_processed = num_edges;
  res.trace.stall_cycles_by_cause["ppb_warmup"] = warmup_stall;
  res.trace.stall_cycles_by_cause["ppb_fill"] = fill_stall;
  return res;
}

}  // namespace hetgraph
