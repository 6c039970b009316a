#include "cocoa/net/link.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cocoa::net {

SimTime serialization_time(std::int32_t bytes, double bits_per_second) {
  return SimTime::from_ns(std::llround(static_cast<double>(bytes) * 8e9 / bits_per_second));
}

BottleneckLink::BottleneckLink(NetEngine& engine, sched::Scheduler& scheduler,
                               RateSchedule rates, SimTime one_way_delay)
    : engine_(engine),
      scheduler_(scheduler),
      rates_(std::move(rates)),
      one_way_delay_(one_way_delay) {
  if (one_way_delay < SimTime{}) throw std::invalid_argument("one_way_delay must be >= 0");
}

sched::EnqueueOutcome BottleneckLink::arrival(Packet pkt, SimTime now) {
  sched::EnqueueOutcome out = scheduler_.enqueue(std::move(pkt), now);
  if (!busy_) start_next(now);
  return out;
}

void BottleneckLink::transmit_complete(Packet pkt, SimTime now) {
  busy_ = false;
  ++transmitted_;
  engine_.schedule(now + one_way_delay_, sim::EventKind::kDelivery, pkt.flow, std::move(pkt));
  start_next(now);
}

void BottleneckLink::start_next(SimTime now) {
  std::optional<Packet> next = scheduler_.dequeue(now);
  if (!next) return;
  busy_ = true;
  busy_until_ = now + serialization_time(next->size_bytes, rates_.rate_at(now));
  const FlowId flow = next->flow;
  engine_.schedule(busy_until_, sim::EventKind::kTransmitComplete, flow, std::move(*next));
}

void ack_return(NetEngine& engine, Packet ack, SimTime now, SimTime one_way_delay) {
  const FlowId flow = ack.flow;
  engine.schedule(now + one_way_delay, sim::EventKind::kDelivery, flow, std::move(ack));
}

}  // namespace cocoa::net
