#include <algorithm>
#include <cstring>

#include "hetgraph/sim.hpp"

namespace hetgraph {

namespace {

constexpr std::int64_t kQ = MemoryLatencyModel::kQ;

PropValue decode_block_prop(std::span<const std::byte> block, std::uint32_t offset_bytes) {
  PropValue v;
  std::memcpy(&v, block.data() + offset_bytes, sizeof(v));
  return v;
}

}  // namespace

std::uint32_t count_loader_requests(const std::vector<std::uint64_t>& blocks,
                                    std::uint64_t carry) {
  std::uint32_t requests = 0;
  std::uint64_t prev = carry;
  for (std::uint64_t b : blocks) {
    if (b != prev) requests++;
    prev = b;
  }
  return requests;
}

TaskResult run_big(const std::vector<MemberSlice>& slices, VertexId union_lo,
                   VertexId union_hi, const PipelineConfig& cfg, PipelineChannels& ch,
                   const GasUdf& udf, const SimParams& sim) {
  HG_CHECK(union_hi > union_lo, "empty gather interval");
  HG_CHECK(static_cast<std::uint64_t>(union_hi) - union_lo <=
               static_cast<std::uint64_t>(cfg.n_gpe) * cfg.buffered_vertices(),
           "merged group interval exceeds combined gather buffer capacity");
  for (const MemberSlice& s : slices) {
    HG_CHECK(s.part != nullptr && s.edge_hi <= s.part->edges.size(), "bad member slice");
    HG_CHECK(s.part->vtx_lo >= union_lo && s.part->vtx_hi <= union_hi,
             "member outside the group interval");
  }

  TaskResult res;
  res.trace.kind = PipelineKind::Big;
  res.output.vtx_lo = union_lo;
  res.output.vtx_hi = union_hi;
  res.output.interleaved = true;
  res.output.values.assign(union_hi - union_lo, udf.identity);

  const std::uint32_t n_spe = cfg.n_spe;
  const std::uint32_t n_gpe = cfg.n_gpe;
  const std::uint32_t per_block = cfg.props_per_block();
  const std::uint32_t block_bytes = cfg.block_bytes();
  const MemoryLatencyModel& mem = ch.props.latency();

  // Flatten the member slices into one edge stream; issue sets may span
  // member boundaries, where source ids fall back (absolute distances).
  std::uint64_t num_edges = 0;
  for (const MemberSlice& s : slices) num_edges += s.edge_hi - s.edge_lo;

  std::int64_t edge_loop_q = 0;
  std::uint64_t mem_requests = 0;
  std::int64_t mem_wait_q = 0;  // portion of set time bound by vertex access
  std::vector<std::uint64_t> pe_tuples(n_gpe, 0);

  // Vertex Loader state: cached last request (block id and data) plus the
  // previous set's closing block for the stride charge.
  std::uint64_t cache_block = kInvalidBlock;
  std::vector<std::byte> cache_data(block_bytes);
  VertexId prev_last_src = 0;
  bool first_set = true;

  std::size_t si = 0;
  std::uint64_t pos = slices.empty() ? 0 : slices[0].edge_lo;
  std::uint64_t consumed = 0;
  std::vector<const Edge*> set_edges;
  set_edges.reserve(n_spe);

  while (consumed < num_edges) {
    // Gather the next issue set across member boundaries.
    set_edges.clear();
    while (set_edges.size() < n_spe && consumed < num_edges) {
      while (pos >= slices[si].edge_hi) {
        si++;
        pos = slices[si].edge_lo;
      }
      set_edges.push_back(&slices[si].part->edges[pos]);
      pos++;
      consumed++;
    }

    // Request pipeline: dedup against the running block, carry from the
    // cached last request.
    std::uint32_t requests = 0;
    std::uint64_t run_block = cache_block;
    for (const Edge* e : set_edges) {
      std::uint64_t blk = static_cast<std::uint64_t>(e->src) / per_block;
      if (blk != run_block) {
        auto rd = ch.props.random_read(blk, run_block == kInvalidBlock ? blk : run_block);
        std::memcpy(cache_data.data(), rd.data.data(), block_bytes);
        run_block = blk;
        requests++;
      }
      // Response pipeline: decode the property at the block offset.
      std::uint32_t off = (e->src % per_block) * cfg.prop_bytes();
      PropValue src_prop = decode_block_prop({cache_data.data(), block_bytes}, off);
      if (!udf.is_active(src_prop)) continue;
      PropValue value = udf.scatter(src_prop, e->weight);
      std::uint32_t pe = e->dst % n_gpe;
      pe_tuples[pe]++;
      PropValue& cell = res.output.values[e->dst - union_lo];
      cell = udf.gather(cell, value);
    }
    cache_block = run_block;
    mem_requests += requests;

    // Timing: one cycle slot per issue set, stretched by the strided
    // service of this set's requests (execute/access decoupling hides
    // per-request latency; the stride between consecutive sets' closing
    // requests governs the sustained service rate).
    VertexId last_src = set_edges.back()->src;
    std::int64_t v_q = 0;
    if (requests > 0) {
      std::uint64_t blk_last = static_cast<std::uint64_t>(last_src) / per_block;
      std::uint64_t blk_prev = first_set ? 0 : prev_last_src / per_block;
      std::uint64_t dist_blocks = blk_last > blk_prev ? blk_last - blk_prev : blk_prev - blk_last;
      v_q = mem.latency_q(dist_blocks * block_bytes);
    }
    std::int64_t t_q = std::max({kQ, static_cast<std::int64_t>(requests) * kQ, v_q});
    mem_wait_q += std::max<std::int64_t>(0, t_q - kQ);
    edge_loop_q += t_q;
    prev_last_src = last_src;
    first_set = false;
  }

  // Router drain bound: each Gather PE consumes one tuple per cycle; the
  // depth-16 stream FIFOs of the merge tree absorb transients, so only the
  // sustained per-PE rate can stall the loop.
  std::uint64_t max_pe = 0;
  for (std::uint64_t t : pe_tuples) max_pe = std::max(max_pe, t);
  std::int64_t router_stall_q = 0;
  if (static_cast<std::int64_t>(max_pe) * kQ > edge_loop_q) {
    router_stall_q = static_cast<std::int64_t>(max_pe) * kQ - edge_loop_q;
    edge_loop_q += router_stall_q;
  }

  std::int64_t cycle = 0;
  if (num_edges > 0) {
    cycle = cycles_from_q(ch.edges.latency().b_q);  // edge burst startup
    cycle += cycles_from_q(edge_loop_q);
    std::uint64_t edge_blocks = (num_edges * cfg.s_e + cfg.s_mem - 1) / cfg.s_mem;
    ch.edges.record_stream(edge_blocks,
                           ch.edges.latency().b_q + static_cast<std::int64_t>(edge_blocks) * kQ);
    ch.props.add_busy_q(mem_wait_q);
  }
  cycle += store_cycles(PipelineKind::Big, cfg);
  cycle += sim.switch_overhead;

  res.trace.cycles_total = cycle;
  res.trace.edges_processed = num_edges;
  res.trace.mem_requests = mem_requests;
  res.trace.stall_cycles_by_cause["mem_wait"] = cycles_from_q(mem_wait_q);
  res.trace.stall_cycles_by_cause["router"] = cycles_from_q(router_stall_q);
  return res;
}

}  // namespace hetgraph
