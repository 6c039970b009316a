#pragma once

#include <cstdint>
#include <map>

#include "cocoa/net/packet.hpp"

namespace cocoa::endpoints {

/// Cumulative-ack receiver. Emits one ack per data packet, echoing that
/// packet's timestamp and id.
class Receiver {
 public:
  explicit Receiver(net::FlowId flow) : flow_(flow) {}

  net::Packet on_data(const net::Packet& pkt, sim::SimTime now);

  std::int64_t cum_ack() const { return cum_ack_; }
  std::size_t out_of_order_runs() const { return ooo_.size(); }
  std::uint64_t data_packets() const { return data_packets_; }

 private:
  net::FlowId flow_;
  std::int64_t cum_ack_ = 0;
  std::map<std::int64_t, std::int64_t> ooo_;  // start -> end, disjoint
  std::uint64_t next_ack_ = 0;
  std::uint64_t data_packets_ = 0;
};

}  // namespace cocoa::endpoints
