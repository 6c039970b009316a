#include <doctest.h>

#include <vector>

#include "cocoa/net/link.hpp"
#include "cocoa/sched/fq.hpp"

using namespace cocoa;
using namespace cocoa::net;
using sim::milliseconds;
using sim::microseconds;
using sim::seconds;

namespace {

RateSchedule halving() { return RateSchedule({{SimTime{}, 20e6}, {seconds(30), 10e6}}); }

Packet data(FlowId flow, std::uint64_t id, std::int32_t size = kMtu) {
  Packet p;
  p.id = id;
  p.flow = flow;
  p.seq_start = static_cast<std::int64_t>(id) * kMss;
  p.seq_end = p.seq_start + (size - kHeaderBytes);
  p.size_bytes = size;
  return p;
}

struct Seen {
  SimTime at;
  sim::EventKind kind;
  std::uint64_t id;
};

// Runs the link until `end`, feeding transmit completions back into it.
std::vector<Seen> run(NetEngine& engine, BottleneckLink& link, SimTime end) {
  std::vector<Seen> seen;
  engine.run_until(end, [&](NetEngine::EventType& ev) {
    seen.push_back({engine.now(), ev.kind, ev.payload.id});
    if (ev.kind == sim::EventKind::kTransmitComplete) link.transmit_complete(ev.payload, engine.now());
  });
  return seen;
}

}  // namespace

TEST_CASE("rate_at applies a step from its start time") {
  const RateSchedule s = halving();
  CHECK(s.rate_at(SimTime::from_seconds(29.999)) == 20e6);
  CHECK(s.rate_at(seconds(30)) == 10e6);
  CHECK(s.rate_at(SimTime{}) == 20e6);
  const RateSchedule doubling({{SimTime{}, 20e6}, {seconds(30), 40e6}});
  CHECK(doubling.rate_at(seconds(45)) == 40e6);
}

TEST_CASE("capacity integral is piecewise") {
  // 20 Mb/s for 30 s + 10 Mb/s for 30 s.
  CHECK(halving().capacity_bits(SimTime{}, seconds(60)) == doctest::Approx(900e6));
  CHECK(halving().capacity_bits(seconds(40), seconds(60)) == doctest::Approx(200e6));
  CHECK(halving().capacity_bits(seconds(10), seconds(10)) == 0.0);
}

TEST_CASE("invalid rate schedules are rejected") {
  CHECK_THROWS_AS(RateSchedule({}), std::invalid_argument);
  CHECK_THROWS_AS(RateSchedule({{milliseconds(1), 1e6}}), std::invalid_argument);
  CHECK_THROWS_AS(RateSchedule({{SimTime{}, 1e6}, {seconds(2), 1e6}, {seconds(1), 1e6}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RateSchedule({{SimTime{}, 1e6}, {SimTime{}, 2e6}}), std::invalid_argument);
  CHECK_THROWS_AS(RateSchedule({{SimTime{}, 0.0}}), std::invalid_argument);
}

TEST_CASE("serialization time is size * 8 / rate") {
  CHECK(serialization_time(1500, 20e6) == microseconds(600));
  CHECK(serialization_time(1500, 10e6) == microseconds(1200));
  CHECK(serialization_time(40, 100e6) == sim::nanoseconds(3200));
}

TEST_CASE("idle link: a 1500 B packet completes 600 us later at 20 Mbit/s") {
  NetEngine engine;
  auto fq = sched::make_fq();
  BottleneckLink link(engine, *fq, halving(), milliseconds(5));
  const auto out = link.arrival(data(0, 1), milliseconds(3));
  CHECK(out.accepted);
  CHECK(link.busy());
  CHECK(link.busy_until() == milliseconds(3) + microseconds(600));
  const auto seen = run(engine, link, seconds(1));
  REQUIRE(seen.size() == 2);
  CHECK(seen[0].kind == sim::EventKind::kTransmitComplete);
  CHECK(seen[0].at == milliseconds(3) + microseconds(600));
  // Propagation after the serializer: one-way latency = serialization + delay.
  CHECK(seen[1].kind == sim::EventKind::kDelivery);
  CHECK(seen[1].at == milliseconds(8) + microseconds(600));
}

TEST_CASE("arrivals while busy wait; back-to-back packets at 10 Mbit/s are 1.2 ms apart") {
  NetEngine engine;
  auto fq = sched::make_fq();
  BottleneckLink link(engine, *fq, RateSchedule::constant(10e6), milliseconds(1));
  link.arrival(data(0, 1), SimTime{});
  link.arrival(data(0, 2), SimTime{});
  link.arrival(data(0, 3), SimTime{});
  CHECK(engine.pending() == 1);  // only the packet in service has an event
  CHECK(fq->backlog() == 2);
  std::vector<SimTime> completions;
  for (const auto& s : run(engine, link, seconds(1))) {
    if (s.kind == sim::EventKind::kTransmitComplete) completions.push_back(s.at);
  }
  REQUIRE(completions.size() == 3);
  CHECK(completions[1] - completions[0] == microseconds(1200));
  CHECK(completions[2] - completions[1] == microseconds(1200));
  CHECK_FALSE(link.busy());
  CHECK(link.transmitted() == 3);
}

TEST_CASE("a rate change mid-serialization only affects the next packet") {
  NetEngine engine;
  auto fq = sched::make_fq();
  BottleneckLink link(engine, *fq, halving(), SimTime{});
  const SimTime t0 = seconds(30) - microseconds(100);
  engine.run_until(t0, [](NetEngine::EventType&) {});
  link.arrival(data(0, 1), t0);
  link.arrival(data(0, 2), t0);
  std::vector<SimTime> completions;
  for (const auto& s : run(engine, link, seconds(31))) {
    if (s.kind == sim::EventKind::kTransmitComplete) completions.push_back(s.at);
  }
  REQUIRE(completions.size() == 2);
  CHECK(completions[0] == t0 + microseconds(600));
  CHECK(completions[1] == completions[0] + microseconds(1200));
}

TEST_CASE("a dropped arrival leaves an idle serializer idle") {
  NetEngine engine;
  auto fq = sched::make_fq(0);
  BottleneckLink link(engine, *fq, halving(), milliseconds(5));
  const auto out = link.arrival(data(0, 1), SimTime{});
  CHECK_FALSE(out.accepted);
  CHECK(out.dropped.size() == 1);
  CHECK_FALSE(link.busy());
  CHECK(engine.pending() == 0);
}

TEST_CASE("the ack path only shifts by the one-way delay and keeps order") {
  NetEngine engine;
  for (std::uint64_t i = 0; i < 5; ++i) {
    Packet ack;
    ack.is_ack = true;
    ack.id = i;
    ack_return(engine, ack, SimTime{}, milliseconds(25));
  }
  std::vector<std::uint64_t> ids;
  engine.run_until(seconds(1), [&](NetEngine::EventType& ev) {
    CHECK(engine.now() == milliseconds(25));
    ids.push_back(ev.payload.id);
  });
  CHECK(ids == std::vector<std::uint64_t>{0, 1, 2, 3, 4});
}
