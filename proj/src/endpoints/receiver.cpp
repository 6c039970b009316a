#include "cocoa/endpoints/receiver.hpp"

#include <algorithm>

namespace cocoa::endpoints {

namespace {
constexpr std::uint64_t kAckIdBit = std::uint64_t{1} << 39;
}

net::Packet Receiver::on_data(const net::Packet& pkt, sim::SimTime) {
  ++data_packets_;
  if (pkt.seq_end > cum_ack_) {
    if (pkt.seq_start <= cum_ack_) {
      cum_ack_ = pkt.seq_end;
      // Absorb any buffered run that is now contiguous.
      while (!ooo_.empty() && ooo_.begin()->first <= cum_ack_) {
        cum_ack_ = std::max(cum_ack_, ooo_.begin()->second);
        ooo_.erase(ooo_.begin());
      }
    } else {
      auto& end = ooo_[pkt.seq_start];
      end = std::max(end, pkt.seq_end);
    }
  }

  net::Packet ack;
  ack.id = (static_cast<std::uint64_t>(flow_) << 40) | kAckIdBit | next_ack_++;
  ack.flow = flow_;
  ack.is_ack = true;
  ack.size_bytes = net::kHeaderBytes;
  ack.ack_seq = cum_ack_;
  ack.ts_echo = pkt.ts_echo;
  ack.echo_id = pkt.id;
  return ack;
}

}  // namespace cocoa::endpoints
