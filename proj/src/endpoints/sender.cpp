#include "cocoa/endpoints/sender.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cocoa/net/link.hpp"

namespace cocoa::endpoints {

namespace {

constexpr std::int64_t kMss = net::kMss;
constexpr std::int64_t kBbrMinCwnd = 4 * kMss;

SimTime abs_diff(SimTime a, SimTime b) { return a > b ? a - b : b - a; }

}  // namespace

std::string_view to_string(Cca cca) {
  switch (cca) {
    case Cca::kReno:
      return "reno";
    case Cca::kCubic:
      return "cubic";
    case Cca::kBbr:
      return "bbr";
  }
  return "unknown";
}

std::optional<Cca> parse_cca(std::string_view name) {
  if (name == "reno") return Cca::kReno;
  if (name == "cubic") return Cca::kCubic;
  if (name == "bbr") return Cca::kBbr;
  return std::nullopt;
}

void RttEstimator::sample(SimTime rtt) {
  min_rtt = sim::min(min_rtt, rtt);
  if (!srtt) {
    srtt = rtt;
    rttvar = SimTime::from_ns(rtt.ns() / 2);
  } else {
    rttvar = SimTime::from_ns((3 * rttvar.ns() + abs_diff(*srtt, rtt).ns()) / 4);
    srtt = SimTime::from_ns((7 * srtt->ns() + rtt.ns()) / 8);
  }
  const SimTime raw = *srtt + SimTime::from_ns(4 * rttvar.ns());
  rto = std::clamp(raw, kMinRto, kMaxRto);
}

Sender::Sender(SenderConfig config) : config_(config), rng_(config.seed) {
  state_.flow = config.flow;
  state_.cca = config.cca;
  state_.cwnd = config.initial_cwnd_segments * kMss;
  switch (config.cca) {
    case Cca::kReno:
      break;
    case Cca::kCubic:
      state_.cca_sub = CubicState{};
      break;
    case Cca::kBbr:
      state_.cca_sub = BbrState{};
      break;
  }
}

std::int64_t Sender::bytes_in_flight() const {
  const std::int64_t outstanding = state_.next_seq - state_.highest_acked;
  return std::max<std::int64_t>(0, outstanding - state_.sacked_out * kMss);
}

Packet Sender::make_packet(std::int64_t seq, SimTime now) {
  Packet p;
  p.id = (static_cast<std::uint64_t>(config_.flow) << 40) | next_packet_++;
  p.flow = config_.flow;
  p.seq_start = seq;
  p.seq_end = seq + kMss;
  p.size_bytes = net::kMtu;
  p.ts_echo = now;
  return p;
}

void Sender::emit(std::int64_t seq, SimTime now, std::vector<Packet>& out) {
  Packet p = make_packet(seq, now);
  if (seq < state_.max_sent) {
    p.retransmit = true;
    ++retransmissions_;
  }
  if (seq == state_.next_seq) state_.next_seq += kMss;
  state_.max_sent = std::max(state_.max_sent, p.seq_end);
  ++packets_sent_;

  if (auto* bbr = std::get_if<BbrState>(&state_.cca_sub)) {
    records_.push_back({p.id, p.seq_end, delivered_, delivered_time_});
    if (bbr->pacing_rate > 0) {
      next_send_time_ =
          sim::max(next_send_time_, now) + net::serialization_time(p.size_bytes, bbr->pacing_rate);
    }
  }
  if (!rto_deadline_) arm_rto(now);
  out.push_back(std::move(p));
}

void Sender::arm_rto(SimTime now) { rto_deadline_ = now + state_.rtt.rto; }

void Sender::send_available(SimTime now, std::vector<Packet>& out) {
  pacing_blocked_ = false;
  const bool paced = state_.cca == Cca::kBbr;
  while (bytes_in_flight() < state_.cwnd) {
    if (paced && now < next_send_time_) {
      pacing_blocked_ = true;
      break;
    }
    emit(state_.next_seq, now, out);
  }
}

std::vector<Packet> Sender::start(SimTime now) {
  delivered_time_ = now;
  next_send_time_ = now;
  if (auto* bbr = std::get_if<BbrState>(&state_.cca_sub)) {
    // No RTT sample yet: assume 1 ms, as the reference implementation does.
    bbr->pacing_rate = kBbrHighGain * static_cast<double>(state_.cwnd) * 8.0 / 1e-3;
    bbr->min_rtt_stamp = now;
  }
  std::vector<Packet> out;
  send_available(now, out);
  return out;
}

void Sender::on_loss(SimTime now, LossSignal signal) {
  ++loss_events_;
  const bool timeout = signal == LossSignal::kTimeout;
  switch (state_.cca) {
    case Cca::kReno:
      state_.ssthresh = std::max<std::int64_t>(state_.cwnd / 2, 2 * kMss);
      state_.cwnd = timeout ? kMss : state_.ssthresh;
      state_.ai_bytes = 0;
      break;
    case Cca::kCubic: {
      auto& cubic = std::get<CubicState>(state_.cca_sub);
      const std::int64_t before = state_.cwnd;
      cubic_begin_epoch(cubic, before, kMss, now);
      const std::int64_t reduced = std::max<std::int64_t>(
          std::llround(static_cast<double>(before) * CubicState::kBeta), 2 * kMss);
      state_.ssthresh = reduced;
      state_.cwnd = timeout ? kMss : reduced;
      break;
    }
    case Cca::kBbr:
      // Loss does not drive the BBR model.
      break;
  }
}

void Sender::reno_grow(std::int64_t acked) {
  // A stretch ack (e.g. the cumulative jump after a go-back-N retransmission)
  // still earns at most one segment.
  state_.ai_bytes += acked;
  if (state_.ai_bytes >= state_.cwnd) {
    state_.ai_bytes = std::min(state_.ai_bytes - state_.cwnd, state_.cwnd - 1);
    state_.cwnd += kMss;
  }
}

void Sender::cubic_grow(CubicState& cubic, std::int64_t acked, SimTime now) {
  if (cubic.w_max == 0) {
    // Congestion avoidance before any loss: the curve starts at its plateau.
    cubic.w_max = state_.cwnd;
    cubic.k = 0;
    cubic.epoch_start = now;
  }
  const SimTime horizon = state_.rtt.min_rtt == SimTime::max() ? SimTime{} : state_.rtt.min_rtt;
  const std::int64_t target = cubic_window(cubic, kMss, now + horizon);
  std::int64_t cnt = target > state_.cwnd ? state_.cwnd / (target - state_.cwnd)
                                          : 100 * (state_.cwnd / kMss);
  // At most one segment of growth per two acked.
  cnt = std::max<std::int64_t>(cnt, 2);
  cubic.ack_count += std::max<std::int64_t>(acked / kMss, 1);
  if (cubic.ack_count >= cnt) {
    // One segment per ack at most, whatever the ack covered.
    cubic.ack_count = std::min(cubic.ack_count - cnt, cnt - 1);
    state_.cwnd += kMss;
  }
}

void Sender::grow_window(std::int64_t acked, SimTime now) {
  if (state_.cca == Cca::kBbr) return;  // BBR sizes cwnd from its model
  if (state_.cwnd < state_.ssthresh) {
    const std::int64_t step = std::min(acked, state_.ssthresh - state_.cwnd);
    state_.cwnd += step;
    acked -= step;
    if (acked <= 0) return;
  }
  switch (state_.cca) {
    case Cca::kReno:
      reno_grow(acked);
      break;
    case Cca::kCubic:
      cubic_grow(std::get<CubicState>(state_.cca_sub), acked, now);
      break;
    case Cca::kBbr:
      break;
  }
}

double Sender::bbr_bdp_bytes(const BbrState& bbr, double gain) const {
  if (bbr.btl_bw <= 0 || bbr.min_rtt == SimTime::max()) {
    return gain * static_cast<double>(config_.initial_cwnd_segments * kMss);
  }
  return gain * bbr.btl_bw * bbr.min_rtt.seconds() / 8.0;
}

void Sender::bbr_update_cwnd(BbrState& bbr, std::int64_t acked) {
  if (bbr.mode == BbrMode::kProbeRtt) {
    state_.cwnd = std::min(state_.cwnd, kBbrMinCwnd);
    return;
  }
  const auto target = static_cast<std::int64_t>(bbr_bdp_bytes(bbr, bbr.cwnd_gain)) + 3 * kMss;
  if (bbr.filled_pipe) {
    state_.cwnd = std::min(state_.cwnd + acked, target);
  } else if (state_.cwnd < target || delivered_ < config_.initial_cwnd_segments * kMss) {
    state_.cwnd += acked;
  }
  state_.cwnd = std::max(state_.cwnd, kBbrMinCwnd);
}

void Sender::bbr_on_ack(BbrState& bbr, const Packet& ack, std::int64_t acked, SimTime now) {
  // Delivery-rate sample against the state captured when the acked packet left.
  delivered_ += kMss;
  delivered_time_ = now;
  bbr.round_start = false;
  auto rec = std::lower_bound(records_.begin(), records_.end(), ack.echo_id,
                              [](const SentRecord& r, std::uint64_t id) { return r.id < id; });
  if (rec != records_.end() && rec->id == ack.echo_id) {
    if (rec->delivered >= bbr.next_round_delivered) {
      bbr.next_round_delivered = delivered_;
      ++bbr.round_count;
      bbr.round_start = true;
    }
    const SimTime interval = now - rec->delivered_time;
    if (interval > SimTime{}) {
      const double bw = static_cast<double>(delivered_ - rec->delivered) * 8.0 / interval.seconds();
      bbr.bw_filter.update(bbr.round_count, bw);
      bbr.btl_bw = bbr.bw_filter.best();
    }
  }
  while (!records_.empty() && records_.front().seq_end <= state_.highest_acked) {
    records_.pop_front();
  }

  if (!bbr.filled_pipe && bbr.round_start) {
    if (bbr.btl_bw >= bbr.full_bw * 1.25) {
      bbr.full_bw = bbr.btl_bw;
      bbr.full_bw_count = 0;
    } else if (++bbr.full_bw_count >= 3) {
      bbr.filled_pipe = true;
    }
  }
  if (bbr.mode == BbrMode::kStartup && bbr.filled_pipe) {
    bbr.mode = BbrMode::kDrain;
    bbr.pacing_gain = kBbrDrainGain;
    bbr.cwnd_gain = kBbrHighGain;
  }
  if (bbr.mode == BbrMode::kDrain &&
      static_cast<double>(bytes_in_flight()) <= bbr_bdp_bytes(bbr, 1.0)) {
    bbr_enter_probe_bw(bbr, now, rng_);
  }
  if (bbr.mode == BbrMode::kProbeBw && now >= bbr.phase_start + bbr.min_rtt) {
    bbr_advance_phase(bbr, now, rng_);
  }

  const SimTime rtt = now - ack.ts_echo;
  const bool expired = now > bbr.min_rtt_stamp + kBbrMinRttWindow;
  if (rtt <= bbr.min_rtt || expired) {
    bbr.min_rtt = rtt;
    bbr.min_rtt_stamp = now;
  }
  if (expired && bbr.mode != BbrMode::kProbeRtt) {
    bbr.mode = BbrMode::kProbeRtt;
    bbr.pacing_gain = 1.0;
    bbr.cwnd_gain = 1.0;
    bbr.prior_cwnd = state_.cwnd;
    bbr.probe_rtt_done.reset();
  }
  if (bbr.mode == BbrMode::kProbeRtt) {
    if (!bbr.probe_rtt_done && bytes_in_flight() <= kBbrMinCwnd) {
      bbr.probe_rtt_done = now + kBbrProbeRttDuration;
      bbr.probe_rtt_round_done = false;
      bbr.next_round_delivered = delivered_;
    } else if (bbr.probe_rtt_done) {
      if (bbr.round_start) bbr.probe_rtt_round_done = true;
      if (bbr.probe_rtt_round_done && now >= *bbr.probe_rtt_done) {
        bbr.min_rtt_stamp = now;
        state_.cwnd = std::max(state_.cwnd, bbr.prior_cwnd);
        if (bbr.filled_pipe) {
          bbr_enter_probe_bw(bbr, now, rng_);
        } else {
          bbr.mode = BbrMode::kStartup;
          bbr.pacing_gain = kBbrHighGain;
          bbr.cwnd_gain = kBbrHighGain;
        }
      }
    }
  }

  if (bbr.btl_bw > 0) {
    const double rate = bbr.pacing_gain * bbr.btl_bw;
    // Startup never lowers the pacing rate.
    if (bbr.filled_pipe || rate > bbr.pacing_rate) bbr.pacing_rate = rate;
  }
  bbr_update_cwnd(bbr, acked);
}

std::vector<Packet> Sender::on_ack(const Packet& ack, SimTime now) {
  if (!ack.is_ack) throw std::logic_error("on_ack called with a data packet");
  if (ack.ack_seq > state_.max_sent) {
    throw std::logic_error("flow " + std::to_string(config_.flow) + ": ack " +
                           std::to_string(ack.ack_seq) + " beyond highest sent byte " +
                           std::to_string(state_.max_sent));
  }
  state_.rtt.sample(now - ack.ts_echo);

  const bool new_data = ack.ack_seq > state_.highest_acked;
  std::int64_t acked = 0;
  if (new_data) {
    acked = ack.ack_seq - state_.highest_acked;
    state_.highest_acked = ack.ack_seq;
    state_.next_seq = std::max(state_.next_seq, state_.highest_acked);
  }

  std::vector<Packet> out;
  if (new_data) {
    if (state_.in_recovery) {
      if (state_.highest_acked >= state_.recover) {
        state_.in_recovery = false;
        state_.sacked_out = 0;
        state_.dupacks = 0;
      } else {
        // Partial ack: the next hole is at the new cumulative ack.
        state_.sacked_out = std::max<std::int64_t>(0, state_.sacked_out - (acked / kMss - 1));
        emit(state_.highest_acked, now, out);
      }
    } else {
      state_.dupacks = 0;
      grow_window(acked, now);
    }
  } else if (ack.ack_seq == state_.highest_acked && state_.max_sent > state_.highest_acked) {
    ++state_.dupacks;
    if (state_.in_recovery) {
      ++state_.sacked_out;
    } else if (state_.dupacks == kDupAckThreshold && state_.highest_acked >= state_.recover) {
      state_.in_recovery = true;
      state_.recover = state_.max_sent;
      state_.sacked_out = state_.dupacks;
      on_loss(now, LossSignal::kDupAcks);
      emit(state_.highest_acked, now, out);
    }
  }

  if (auto* bbr = std::get_if<BbrState>(&state_.cca_sub)) bbr_on_ack(*bbr, ack, acked, now);

  if (new_data) {
    rto_deadline_.reset();
    if (state_.max_sent > state_.highest_acked) arm_rto(now);
  }
  send_available(now, out);
  return out;
}

std::vector<Packet> Sender::on_timer(SimTime now) {
  std::vector<Packet> out;
  if (rto_deadline_ && now >= *rto_deadline_) {
    ++timeouts_;
    on_loss(now, LossSignal::kTimeout);
    state_.rtt.rto = sim::min(state_.rtt.rto + state_.rtt.rto, kMaxRto);
    // Go back N: everything past the cumulative ack is resent.
    state_.next_seq = state_.highest_acked;
    state_.in_recovery = false;
    state_.sacked_out = 0;
    state_.dupacks = 0;
    state_.recover = state_.max_sent;
    rto_deadline_.reset();
    next_send_time_ = sim::min(next_send_time_, now);
  }
  send_available(now, out);
  if (!rto_deadline_ && state_.max_sent > state_.highest_acked) arm_rto(now);
  return out;
}

std::optional<SimTime> Sender::next_wakeup() const {
  std::optional<SimTime> t = rto_deadline_;
  if (pacing_blocked_ && (!t || next_send_time_ < *t)) t = next_send_time_;
  return t;
}

}  // namespace cocoa::endpoints
