#include "cocoa/sched/fq.hpp"

namespace cocoa::sched {

EnqueueOutcome FqFlowQueue::enqueue(Packet pkt, SimTime now, const FlowHooks& hooks) {
  EnqueueOutcome out;
  const bool trace = hooks.tracing();
  if (packets_.size() >= limit_) {
    if (trace) {
      hooks.emit({now, pkt.flow, TraceKind::kDrop, 0, static_cast<std::int64_t>(limit_),
                  static_cast<std::int64_t>(packets_.size())});
    }
    out.dropped.push_back({std::move(pkt), DropCause::kTail});
    return out;
  }
  bytes_ += pkt.size_bytes;
  packets_.push_back(std::move(pkt));
  out.accepted = true;
  if (trace) {
    hooks.emit({now, packets_.back().flow, TraceKind::kAccept, 0,
                static_cast<std::int64_t>(limit_), static_cast<std::int64_t>(packets_.size())});
  }
  return out;
}

std::optional<Packet> FqFlowQueue::dequeue(SimTime, const FlowHooks&) {
  if (packets_.empty()) return std::nullopt;
  return pop_front();
}

Packet FqFlowQueue::pop_front() {
  Packet p = std::move(packets_.front());
  packets_.pop_front();
  bytes_ -= p.size_bytes;
  return p;
}

std::unique_ptr<FqScheduler> make_fq(std::size_t limit, std::int32_t quantum) {
  return std::make_unique<FqScheduler>(
      "fq", [limit](FlowId) { return FqFlowQueue(limit); }, quantum);
}

}  // namespace cocoa::sched
