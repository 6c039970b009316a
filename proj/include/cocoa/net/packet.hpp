#pragma once

#include <cstdint>

#include "cocoa/sim/time.hpp"

namespace cocoa::net {

using sim::SimTime;
using FlowId = std::uint32_t;

inline constexpr std::int32_t kMtu = 1500;
inline constexpr std::int32_t kHeaderBytes = 40;
inline constexpr std::int32_t kMss = kMtu - kHeaderBytes;

struct Packet {
  std::uint64_t id = 0;
  FlowId flow = 0;
  std::int64_t seq_start = 0;  // byte offsets, data only
  std::int64_t seq_end = 0;
  std::int32_t size_bytes = kHeaderBytes;  // payload + header
  bool is_ack = false;
  bool retransmit = false;
  std::int64_t ack_seq = 0;  // cumulative ack, acks only
  // Data: sender timestamp. Ack: timestamp echoed from the data packet that
  // triggered it.
  SimTime ts_echo;
  // Ack only: id of the data packet that triggered this ack.
  std::uint64_t echo_id = 0;
  SimTime enqueue_time;  // set by the scheduler

  std::int32_t payload_bytes() const { return is_ack ? 0 : size_bytes - kHeaderBytes; }
};

}  // namespace cocoa::net
