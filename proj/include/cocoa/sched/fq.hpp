#pragma once

#include <deque>
#include <memory>

#include "cocoa/sched/fair_queue.hpp"

namespace cocoa::sched {

inline constexpr std::size_t kFqFlowLimit = 100;

/// Tail-drop FIFO used per flow by the fq baseline.
class FqFlowQueue {
 public:
  explicit FqFlowQueue(std::size_t limit = kFqFlowLimit) : limit_(limit) {}

  EnqueueOutcome enqueue(Packet pkt, SimTime now, const FlowHooks& hooks);
  std::optional<Packet> dequeue(SimTime now, const FlowHooks& hooks);

  std::size_t size() const { return packets_.size(); }
  std::size_t limit() const { return limit_; }
  bool empty() const { return packets_.empty(); }
  const Packet& front() const { return packets_.front(); }
  std::int64_t bytes() const { return bytes_; }

  /// Removes the head without scheduler bookkeeping.
  Packet pop_front();

 private:
  std::size_t limit_;
  std::deque<Packet> packets_;
  std::int64_t bytes_ = 0;
};

using FqScheduler = FairQueue<FqFlowQueue>;

std::unique_ptr<FqScheduler> make_fq(std::size_t limit = kFqFlowLimit,
                                     std::int32_t quantum = net::kMtu);

}  // namespace cocoa::sched
