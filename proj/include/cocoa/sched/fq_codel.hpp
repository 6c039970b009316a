#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "cocoa/sched/fq.hpp"

namespace cocoa::sched {

struct CodelParams {
  SimTime target = sim::milliseconds(5);
  SimTime interval = sim::milliseconds(100);
};

/// Per-flow CoDel control state.
struct CodelState {
  std::optional<SimTime> first_above_time;
  SimTime drop_next;
  std::uint32_t count = 0;
  std::uint32_t lastcount = 0;
  bool dropping = false;
};

/// drop_next spacing: t + interval / sqrt(count).
SimTime codel_control_law(SimTime t, SimTime interval, std::uint32_t count);

/// Head-drop CoDel on top of a tail-drop FIFO.
class CodelFlowQueue {
 public:
  explicit CodelFlowQueue(CodelParams params = {}, std::size_t limit = kFqFlowLimit)
      : params_(params), fifo_(limit) {}

  EnqueueOutcome enqueue(Packet pkt, SimTime now, const FlowHooks& hooks);
  std::optional<Packet> dequeue(SimTime now, const FlowHooks& hooks);

  std::size_t size() const { return fifo_.size(); }
  const CodelState& state() const { return state_; }
  std::uint64_t codel_drops() const { return codel_drops_; }

 private:
  struct DodequeueResult {
    std::optional<Packet> packet;
    bool ok_to_drop = false;
  };
  DodequeueResult dodequeue(SimTime now);
  void drop(const Packet& p, SimTime now, const FlowHooks& hooks);

  CodelParams params_;
  FqFlowQueue fifo_;
  CodelState state_;
  std::uint64_t codel_drops_ = 0;
};

using FqCodelScheduler = FairQueue<CodelFlowQueue>;

std::unique_ptr<FqCodelScheduler> make_fq_codel(CodelParams params = {},
                                                std::size_t limit = kFqFlowLimit,
                                                std::int32_t quantum = net::kMtu);

}  // namespace cocoa::sched
