#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "cocoa/endpoints/bbr.hpp"
#include "cocoa/endpoints/cubic.hpp"
#include "cocoa/net/packet.hpp"
#include "cocoa/sim/rng.hpp"

namespace cocoa::endpoints {

using net::FlowId;
using net::Packet;

enum class Cca : std::uint8_t { kReno, kCubic, kBbr };

std::string_view to_string(Cca cca);
std::optional<Cca> parse_cca(std::string_view name);

enum class LossSignal : std::uint8_t { kDupAcks, kTimeout };

inline constexpr SimTime kMinRto = sim::milliseconds(200);
inline constexpr SimTime kInitialRto = sim::seconds(1);
inline constexpr SimTime kMaxRto = sim::seconds(60);
inline constexpr int kDupAckThreshold = 3;

/// RFC 6298 smoothed RTT, variance and retransmission timeout.
struct RttEstimator {
  std::optional<SimTime> srtt;
  SimTime rttvar;
  SimTime min_rtt = SimTime::max();
  SimTime rto = kInitialRto;

  void sample(SimTime rtt);
};

struct SenderConfig {
  FlowId flow = 0;
  Cca cca = Cca::kCubic;
  std::uint64_t seed = 1;  // drives the BBR gain-cycle rotation
  std::int64_t initial_cwnd_segments = 10;
};

struct SenderState {
  FlowId flow = 0;
  Cca cca = Cca::kCubic;
  std::int64_t cwnd = 0;  // bytes
  std::int64_t ssthresh = std::numeric_limits<std::int64_t>::max();
  std::int64_t next_seq = 0;
  std::int64_t max_sent = 0;  // highest byte ever sent
  std::int64_t highest_acked = 0;
  int dupacks = 0;
  RttEstimator rtt;

  bool in_recovery = false;
  std::int64_t recover = 0;     // max_sent when recovery began
  std::int64_t sacked_out = 0;  // segments known to have left the network via dupacks
  std::int64_t ai_bytes = 0;    // Reno additive-increase accumulator

  std::variant<std::monostate, CubicState, BbrState> cca_sub;
};

/// Bulk-transfer sender with per-packet acks and NewReno-style recovery.
/// Reno and Cubic are unpaced; BBR paces at its pacing rate.
class Sender {
 public:
  explicit Sender(SenderConfig config);

  /// Opens the flow and returns the initial burst (or first paced packet).
  std::vector<Packet> start(SimTime now);

  /// Throws std::logic_error for an ack beyond anything sent.
  std::vector<Packet> on_ack(const Packet& ack, SimTime now);

  /// Reacts to a loss signal: window reduction per CCA (none for BBR).
  void on_loss(SimTime now, LossSignal signal);

  /// Retransmission timeout and pacing release.
  std::vector<Packet> on_timer(SimTime now);

  /// Earliest time on_timer has work to do, if any.
  std::optional<SimTime> next_wakeup() const;

  const SenderState& state() const { return state_; }
  const CubicState* cubic() const { return std::get_if<CubicState>(&state_.cca_sub); }
  const BbrState* bbr() const { return std::get_if<BbrState>(&state_.cca_sub); }

  /// Bytes believed to be in the network: outstanding minus segments reported
  /// as received out of order by duplicate acks.
  std::int64_t bytes_in_flight() const;

  std::uint64_t packets_sent() const { return packets_sent_; }
  std::uint64_t retransmissions() const { return retransmissions_; }
  std::uint64_t timeouts() const { return timeouts_; }
  std::uint64_t loss_events() const { return loss_events_; }

  static constexpr std::int64_t mss() { return net::kMss; }

 private:
  struct SentRecord {
    std::uint64_t id;
    std::int64_t seq_end;
    std::int64_t delivered;
    SimTime delivered_time;
  };

  Packet make_packet(std::int64_t seq, SimTime now);
  void emit(std::int64_t seq, SimTime now, std::vector<Packet>& out);
  void send_available(SimTime now, std::vector<Packet>& out);
  void arm_rto(SimTime now);

  void grow_window(std::int64_t acked, SimTime now);
  void reno_grow(std::int64_t acked);
  void cubic_grow(CubicState& cubic, std::int64_t acked, SimTime now);

  void bbr_on_ack(BbrState& bbr, const Packet& ack, std::int64_t acked, SimTime now);
  void bbr_update_cwnd(BbrState& bbr, std::int64_t acked);
  double bbr_bdp_bytes(const BbrState& bbr, double gain) const;

  SenderConfig config_;
  SenderState state_;
  sim::Rng rng_;
  std::uint64_t next_packet_ = 0;

  std::optional<SimTime> rto_deadline_;
  SimTime next_send_time_;
  bool pacing_blocked_ = false;

  // Delivery-rate sampling (BBR).
  std::int64_t delivered_ = 0;
  SimTime delivered_time_;
  std::deque<SentRecord> records_;

  std::uint64_t packets_sent_ = 0;
  std::uint64_t retransmissions_ = 0;
  std::uint64_t timeouts_ = 0;
  std::uint64_t loss_events_ = 0;
};

}  // namespace cocoa::endpoints
