#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>

#include "cocoa/sched/scheduler.hpp"

namespace cocoa::sched {

/// Deficit round robin over flow keys with a byte quantum. Owns only the ring
/// and the deficits; packet storage belongs to the caller.
class DrrState {
 public:
  explicit DrrState(std::int32_t quantum = net::kMtu) : quantum_(quantum) {}

  std::int32_t quantum() const { return quantum_; }
  bool active(FlowId flow) const;
  std::int64_t deficit(FlowId flow) const;
  std::size_t ring_size() const { return ring_.size(); }

  /// Adds a newly backlogged flow to the tail of the ring.
  void activate(FlowId flow);

  /// Queues must provide `std::optional<Packet> pop(FlowId, SimTime)` and
  /// `bool empty(FlowId) const`. pop may return nothing if the flow's queue
  /// drained (an AQM may discard its remaining packets).
  template <class Queues>
  std::optional<std::pair<FlowId, Packet>> dequeue(Queues& queues, SimTime now) {
    while (!ring_.empty()) {
      const FlowId flow = ring_.front();
      Slot& slot = slots_[flow];
      if (slot.deficit <= 0) {
        slot.deficit += quantum_;
        ring_.pop_front();
        ring_.push_back(flow);
        continue;
      }
      std::optional<Packet> pkt = queues.pop(flow, now);
      if (!pkt) {
        deactivate_front(slot);
        continue;
      }
      slot.deficit -= pkt->size_bytes;
      if (queues.empty(flow)) deactivate_front(slot);
      return std::pair<FlowId, Packet>{flow, std::move(*pkt)};
    }
    return std::nullopt;
  }

 private:
  struct Slot {
    std::int64_t deficit = 0;
    bool in_ring = false;
  };

  void deactivate_front(Slot& slot) {
    ring_.pop_front();
    slot.in_ring = false;
    slot.deficit = 0;
  }

  std::int32_t quantum_;
  std::deque<FlowId> ring_;
  std::map<FlowId, Slot> slots_;
};

}  // namespace cocoa::sched
