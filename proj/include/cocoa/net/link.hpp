#pragma once

#include <cstdint>

#include "cocoa/net/packet.hpp"
#include "cocoa/net/rate_schedule.hpp"
#include "cocoa/sched/scheduler.hpp"
#include "cocoa/sim/engine.hpp"

namespace cocoa::net {

using NetEngine = sim::Engine<Packet>;

/// Time to clock `bytes` onto a link running at `bits_per_second`.
SimTime serialization_time(std::int32_t bytes, double bits_per_second);

/// qdisc + rate-limited serializer + propagation delay, in that order.
///
/// A packet's serialization time is fixed by the rate in effect when it starts
/// serializing; a later rate change only affects the packets after it.
class BottleneckLink {
 public:
  BottleneckLink(NetEngine& engine, sched::Scheduler& scheduler, RateSchedule rates,
                 SimTime one_way_delay);

  /// A data packet reaches the bottleneck. Drops are the scheduler's call.
  sched::EnqueueOutcome arrival(Packet pkt, SimTime now);

  /// Handles the kTransmitComplete event for `pkt`: hands it to the
  /// propagation delay and starts the next serialization, if any.
  void transmit_complete(Packet pkt, SimTime now);

  bool busy() const { return busy_; }
  SimTime busy_until() const { return busy_until_; }
  SimTime one_way_delay() const { return one_way_delay_; }
  const RateSchedule& rates() const { return rates_; }
  sched::Scheduler& scheduler() { return scheduler_; }
  std::uint64_t transmitted() const { return transmitted_; }

 private:
  void start_next(SimTime now);

  NetEngine& engine_;
  sched::Scheduler& scheduler_;
  RateSchedule rates_;
  SimTime one_way_delay_;
  bool busy_ = false;
  SimTime busy_until_;
  std::uint64_t transmitted_ = 0;
};

/// Unshaped, lossless return path: the ack arrives `one_way_delay` later.
void ack_return(NetEngine& engine, Packet ack, SimTime now, SimTime one_way_delay);

}  // namespace cocoa::net
