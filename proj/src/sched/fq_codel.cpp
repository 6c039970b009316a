#include "cocoa/sched/fq_codel.hpp"

#include <cmath>

namespace cocoa::sched {

SimTime codel_control_law(SimTime t, SimTime interval, std::uint32_t count) {
  return t + interval.scaled(1.0 / std::sqrt(static_cast<double>(count)));
}

EnqueueOutcome CodelFlowQueue::enqueue(Packet pkt, SimTime now, const FlowHooks& hooks) {
  return fifo_.enqueue(std::move(pkt), now, hooks);
}

// Follows the CoDel reference pseudocode: the sojourn time of the packet at
// the head decides whether we are above target; dropping starts once we have
// been above target for a full interval.
CodelFlowQueue::DodequeueResult CodelFlowQueue::dodequeue(SimTime now) {
  DodequeueResult r;
  if (fifo_.empty()) {
    state_.first_above_time.reset();
    return r;
  }
  r.packet = fifo_.pop_front();
  const SimTime sojourn = now - r.packet->enqueue_time;
  if (sojourn < params_.target || fifo_.bytes() <= net::kMtu) {
    state_.first_above_time.reset();
  } else if (!state_.first_above_time) {
    state_.first_above_time = now + params_.interval;
  } else if (now >= *state_.first_above_time) {
    r.ok_to_drop = true;
  }
  return r;
}

void CodelFlowQueue::drop(const Packet& p, SimTime now, const FlowHooks& hooks) {
  ++codel_drops_;
  hooks.drop(p, DropCause::kCodel, now);
}

std::optional<Packet> CodelFlowQueue::dequeue(SimTime now, const FlowHooks& hooks) {
  DodequeueResult r = dodequeue(now);
  if (!r.packet) {
    state_.dropping = false;
    return std::nullopt;
  }
  if (state_.dropping) {
    if (!r.ok_to_drop) {
      state_.dropping = false;
    }
    while (state_.dropping && now >= state_.drop_next) {
      drop(*r.packet, now, hooks);
      ++state_.count;
      r = dodequeue(now);
      if (!r.packet || !r.ok_to_drop) {
        state_.dropping = false;
      } else {
        state_.drop_next = codel_control_law(state_.drop_next, params_.interval, state_.count);
      }
    }
  } else if (r.ok_to_drop) {
    drop(*r.packet, now, hooks);
    r = dodequeue(now);
    state_.dropping = true;
    const std::uint32_t delta = state_.count - state_.lastcount;
    // Re-entering shortly after leaving resumes near the previous rate.
    if (delta > 1 && now - state_.drop_next < params_.interval.scaled(16)) {
      state_.count = delta;
    } else {
      state_.count = 1;
    }
    state_.drop_next = codel_control_law(now, params_.interval, state_.count);
    state_.lastcount = state_.count;
  }
  return std::move(r.packet);
}

std::unique_ptr<FqCodelScheduler> make_fq_codel(CodelParams params, std::size_t limit,
                                                std::int32_t quantum) {
  return std::make_unique<FqCodelScheduler>(
      "fq_codel", [params, limit](FlowId) { return CodelFlowQueue(params, limit); }, quantum);
}

}  // namespace cocoa::sched
