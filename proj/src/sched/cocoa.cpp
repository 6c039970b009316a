#include "cocoa/sched/cocoa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cocoa::sched {

void CocoaParams::validate() const {
  if (!(multiplier > 0)) throw std::invalid_argument("cocoa.multiplier must be > 0");
  if (!(max_increase_factor >= 1)) {
    throw std::invalid_argument("cocoa.max_increase_factor must be >= 1");
  }
  if (max_gi <= SimTime{}) throw std::invalid_argument("cocoa.max_gi must be > 0");
  if (buffer_floor < 1) throw std::invalid_argument("cocoa.buffer_floor must be >= 1");
  if (initial_buffer < buffer_floor) {
    throw std::invalid_argument("cocoa.initial_buffer must be >= cocoa.buffer_floor");
  }
}

std::int64_t compute_increase(const IntervalStats& s, SimTime now) {
  if (s.idle_time <= SimTime{}) return 0;
  const SimTime active = (now - s.start) - s.idle_time;
  if (active < sim::milliseconds(1)) return 0;
  const double rate = static_cast<double>(s.packets_transmitted) / active.seconds();
  return std::llround(rate * s.idle_time.seconds());
}

CocoaFlowQueue::CocoaFlowQueue(CocoaParams params, FlowId flow)
    : params_(params), flow_(flow), buffer_size_(params.initial_buffer) {
  params_.validate();
}

void CocoaFlowQueue::begin(SimTime now) {
  started_ = true;
  cur_ = IntervalStats{};
  cur_.start = now;
  gi_start_ = now;
  gi_min_end_ = now;
}

void CocoaFlowQueue::sample_occupancy() {
  cur_.min_occupancy = std::min(cur_.min_occupancy, occupancy());
}

void CocoaFlowQueue::end_idle_span(SimTime now) {
  if (cur_.empty_since) {
    cur_.idle_time += now - *cur_.empty_since;
    cur_.empty_since.reset();
  }
}

void CocoaFlowQueue::trace(const FlowHooks& hooks, SimTime now, TraceKind kind,
                           std::int64_t delta) const {
  hooks.emit({now, flow_, kind, delta, buffer_size_, occupancy()});
}

void CocoaFlowQueue::close_interval(SimTime now) {
  const SimTime duration = now - cur_.start;
  if (duration > li_duration_) {
    li_duration_ = duration;
    li_min_occupancy_ = cur_.min_occupancy;
  }
  cur_ = IntervalStats{};
  cur_.start = now;
  cur_.min_occupancy = occupancy();
  if (queue_.empty()) cur_.empty_since = now;
  is_first_interval_ = false;
  ++intervals_closed_;
}

void CocoaFlowQueue::start_gi(SimTime now) {
  gi_start_ = now;
  gi_min_end_ = now + sim::min(li_duration_.scaled(params_.multiplier), params_.max_gi);
  li_duration_ = SimTime{};
  li_min_occupancy_ = 0;
}

EnqueueOutcome CocoaFlowQueue::enqueue(Packet pkt, SimTime now, const FlowHooks& hooks) {
  if (!started_) begin(now);
  const bool tracing = hooks.tracing();
  EnqueueOutcome out;

  auto accept = [&] {
    end_idle_span(now);
    queue_.push_back(std::move(pkt));
    sample_occupancy();
    out.accepted = true;
    if (tracing) trace(hooks, now, TraceKind::kAccept, 0);
  };

  if (occupancy() < buffer_size_) {
    last_branch_ = CocoaBranch::kAccept;
    accept();
    return out;
  }

  if (cur_.idle_time > SimTime{} && !cur_.enlarged && !is_first_interval_) {
    const std::int64_t increase = compute_increase(cur_, now);
    const auto cap = static_cast<std::int64_t>(
        std::floor(params_.max_increase_factor * static_cast<double>(buffer_size_)));
    const std::int64_t grown = std::min(buffer_size_ + increase, cap);
    // A rounded-to-zero increase cannot make room, so it is not an enlargement.
    if (grown > buffer_size_) {
      const std::int64_t delta = grown - buffer_size_;
      buffer_size_ = grown;
      cur_.enlarged = true;
      ++enlargements_;
      last_branch_ = CocoaBranch::kEnlarge;
      if (tracing) trace(hooks, now, TraceKind::kEnlarge, delta);
      accept();
      return out;
    }
  }

  if (cur_.enlarged || is_first_interval_) {
    last_branch_ = CocoaBranch::kRestartGi;
    close_interval(now);
    start_gi(now);
    if (tracing) trace(hooks, now, TraceKind::kGiStart, 0);
  } else if (now >= gi_min_end_) {
    last_branch_ = CocoaBranch::kShrink;
    // The open interval competes for the LI before the GI is evaluated.
    close_interval(now);
    const std::int64_t shrink =
        std::min(li_min_occupancy_, buffer_size_ - params_.buffer_floor);
    if (shrink > 0) {
      buffer_size_ -= shrink;
      // Evict the newest packets; already queued older ones keep their order.
      while (occupancy() > buffer_size_) {
        out.dropped.push_back({std::move(queue_.back()), DropCause::kCocoaShrink});
        queue_.pop_back();
      }
      sample_occupancy();
      ++shrinks_;
      if (tracing) trace(hooks, now, TraceKind::kShrink, shrink);
    }
    start_gi(now);
    if (tracing) trace(hooks, now, TraceKind::kGiStart, 0);
  } else {
    last_branch_ = CocoaBranch::kDrop;
    close_interval(now);
  }

  ++drop_decisions_;
  if (tracing) trace(hooks, now, TraceKind::kDrop, 0);
  out.dropped.push_back({std::move(pkt), DropCause::kTail});
  return out;
}

std::optional<Packet> CocoaFlowQueue::dequeue(SimTime now, const FlowHooks&) {
  if (queue_.empty()) return std::nullopt;
  Packet p = std::move(queue_.front());
  queue_.pop_front();
  ++cur_.packets_transmitted;
  sample_occupancy();
  if (queue_.empty()) cur_.empty_since = now;
  return p;
}

std::unique_ptr<CocoaScheduler> make_cocoa(CocoaParams params, std::int32_t quantum) {
  params.validate();
  return std::make_unique<CocoaScheduler>(
      "cocoa", [params](FlowId flow) { return CocoaFlowQueue(params, flow); }, quantum);
}

}  // namespace cocoa::sched
