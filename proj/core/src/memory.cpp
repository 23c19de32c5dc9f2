#include "hetgraph/memory.hpp"

#include <cstring>

namespace hetgraph {

Channel::Channel(std::uint64_t capacity_bytes, MemoryLatencyModel latency,
                 std::uint32_t block_bytes)
    : capacity_(capacity_bytes), latency_(latency), block_bytes_(block_bytes) {
  HG_CHECK(block_bytes_ > 0, "channel block size must be positive");
  latency_.validate();
}

void Channel::write_blocks(std::uint64_t block_lo, std::span<const std::byte> data) {
  HG_CHECK(data.size() % block_bytes_ == 0, "channel writes must be block aligned");
  std::uint64_t end = block_lo * block_bytes_ + data.size();
  if (end > capacity_) {
    throw Error("channel out of memory: layout needs " + std::to_string(end) +
                " bytes, capacity is " + std::to_string(capacity_));
  }
  if (end > contents_.size()) contents_.resize(end);
  std::memcpy(contents_.data() + block_lo * block_bytes_, data.data(), data.size());
}

std::span<const std::byte> Channel::view(std::uint64_t block_lo, std::uint64_t n) const {
  std::uint64_t lo = block_lo * block_bytes_;
  std::uint64_t hi = lo + n * block_bytes_;
  if (hi > contents_.size()) {
    throw Error("channel read out of range: blocks [" + std::to_string(block_lo) + ", " +
                std::to_string(block_lo + n) + ") beyond " +
                std::to_string(contents_.size() / block_bytes_) + " written blocks");
  }
  return {contents_.data() + lo, n * block_bytes_};
}

Channel::BurstRead Channel::burst_read(std::uint64_t block_lo, std::uint64_t n) {
  BurstRead r;
  r.data = view(block_lo, n);
  r.cycles_q = latency_.b_q + static_cast<std::int64_t>(n) * MemoryLatencyModel::kQ;
  reads_issued_++;
  blocks_transferred_ += n;
  cycles_busy_q_ += r.cycles_q;
  return r;
}

Channel::RandomRead Channel::random_read(std::uint64_t block, std::uint64_t prev_block) {
  RandomRead r;
  r.data = view(block, 1);
  std::uint64_t dist = block > prev_block ? block - prev_block : prev_block - block;
  r.cycles_q = latency_.latency_q(dist * block_bytes_);
  reads_issued_++;
  blocks_transferred_ += 1;
  return r;
}

void Channel::record_stream(std::uint64_t blocks, std::int64_t cycles_q) {
  reads_issued_++;
  blocks_transferred_ += blocks;
  cycles_busy_q_ += cycles_q;
}

}  // namespace hetgraph
