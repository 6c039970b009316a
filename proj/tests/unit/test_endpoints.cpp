#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <vector>

#include "cocoa/endpoints/receiver.hpp"
#include "cocoa/endpoints/sender.hpp"

using namespace cocoa;
using namespace cocoa::endpoints;
using sim::milliseconds;
using sim::seconds;

namespace {

constexpr std::int64_t kMss = net::kMss;

Packet ack_for(std::int64_t ack_seq, SimTime echo, std::uint64_t echo_id = 0) {
  Packet a;
  a.is_ack = true;
  a.size_bytes = net::kHeaderBytes;
  a.ack_seq = ack_seq;
  a.ts_echo = echo;
  a.echo_id = echo_id;
  return a;
}

Sender make(Cca cca, std::int64_t initial_segments = 10) {
  SenderConfig c;
  c.cca = cca;
  c.initial_cwnd_segments = initial_segments;
  return Sender(c);
}

std::size_t count_retransmits(const std::vector<Packet>& v) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](const Packet& p) { return p.retransmit; }));
}

}  // namespace

TEST_CASE("the initial window goes out at start") {
  Sender s = make(Cca::kReno);
  const auto burst = s.start(SimTime{});
  REQUIRE(burst.size() == 10);
  for (std::size_t i = 0; i < burst.size(); ++i) {
    CHECK(burst[i].seq_start == static_cast<std::int64_t>(i) * kMss);
    CHECK(burst[i].size_bytes == net::kMtu);
    CHECK(burst[i].payload_bytes() == kMss);
    CHECK_FALSE(burst[i].retransmit);
  }
  CHECK(s.bytes_in_flight() == 10 * kMss);
}

TEST_CASE("reno slow start: 2 MSS and 2 acks -> 4 MSS") {
  Sender s = make(Cca::kReno, 2);
  s.start(SimTime{});
  s.on_ack(ack_for(kMss, SimTime{}), milliseconds(10));
  s.on_ack(ack_for(2 * kMss, SimTime{}), milliseconds(10));
  CHECK(s.state().cwnd == 4 * kMss);
}

TEST_CASE("reno congestion avoidance: one window of acks adds one MSS") {
  Sender s = make(Cca::kReno, 20);
  s.start(SimTime{});
  s.on_loss(SimTime{}, LossSignal::kDupAcks);  // 20 -> 10 MSS, ssthresh 10 MSS
  REQUIRE(s.state().cwnd == 10 * kMss);
  REQUIRE(s.state().ssthresh == 10 * kMss);
  // Byte-counting AIMD oracle: the window grows once 10 MSS have been acked.
  for (int i = 1; i <= 9; ++i) s.on_ack(ack_for(i * kMss, SimTime{}), milliseconds(10));
  CHECK(s.state().cwnd == 10 * kMss);
  s.on_ack(ack_for(10 * kMss, SimTime{}), milliseconds(10));
  CHECK(s.state().cwnd == 11 * kMss);
}

TEST_CASE("a stretch ack grows congestion avoidance by at most one MSS") {
  Sender s = make(Cca::kReno, 20);
  s.start(SimTime{});
  s.on_loss(SimTime{}, LossSignal::kDupAcks);
  s.on_ack(ack_for(20 * kMss, SimTime{}), milliseconds(10));
  CHECK(s.state().cwnd == 11 * kMss);
}

TEST_CASE("reno halves on loss and collapses to one MSS on timeout") {
  Sender s = make(Cca::kReno);
  s.on_loss(SimTime{}, LossSignal::kDupAcks);
  CHECK(s.state().cwnd == 5 * kMss);
  CHECK(s.state().ssthresh == 5 * kMss);
  Sender t = make(Cca::kReno);
  t.on_loss(SimTime{}, LossSignal::kTimeout);
  CHECK(t.state().cwnd == kMss);
  CHECK(t.state().ssthresh == 5 * kMss);
}

TEST_CASE("cubic: 100 MSS -> 70 MSS with w_max 100 MSS and K = cbrt(w_max * 0.3 / 0.4)") {
  Sender s = make(Cca::kCubic, 100);
  s.on_loss(seconds(2), LossSignal::kDupAcks);
  CHECK(s.state().cwnd == 70 * kMss);
  REQUIRE(s.cubic());
  CHECK(s.cubic()->w_max == 100 * kMss);
  CHECK(s.cubic()->k == doctest::Approx(std::cbrt(100 * 0.3 / 0.4)));
  CHECK(s.cubic()->epoch_start == seconds(2));
}

TEST_CASE("cubic window function") {
  CubicState st;
  cubic_begin_epoch(st, 100 * kMss, kMss, SimTime{});
  const SimTime at_k = SimTime::from_seconds(st.k);
  CHECK(cubic_window(st, kMss, SimTime{}) == 70 * kMss);
  CHECK(std::llabs(cubic_window(st, kMss, at_k) - 100 * kMss) <= 1);
  CHECK(std::llabs(cubic_window(st, kMss, at_k + seconds(1)) -
                   std::llround(100.4 * kMss)) <= 1);
  // Non-decreasing in time within the epoch.
  std::int64_t prev = 0;
  for (int ms = 0; ms <= 10'000; ms += 7) {
    const auto w = cubic_window(st, kMss, milliseconds(ms));
    CHECK(w >= prev);
    prev = w;
  }
  // Never below one MSS.
  CubicState tiny;
  cubic_begin_epoch(tiny, kMss, kMss, seconds(5));
  CHECK(cubic_window(tiny, kMss, seconds(5)) >= kMss);
}

TEST_CASE("three duplicate acks retransmit the missing segment exactly once") {
  Sender s = make(Cca::kReno);
  s.start(SimTime{});
  std::vector<Packet> sent = s.on_ack(ack_for(kMss, SimTime{}), milliseconds(10));
  std::size_t retransmits = count_retransmits(sent);
  for (int d = 1; d <= 5; ++d) {
    const auto out = s.on_ack(ack_for(kMss, SimTime{}), milliseconds(10 + d));
    retransmits += count_retransmits(out);
    if (d == 3) {
      REQUIRE(count_retransmits(out) == 1);
      const auto it = std::find_if(out.begin(), out.end(), [](const Packet& p) { return p.retransmit; });
      CHECK(it->seq_start == kMss);
    }
    CHECK(s.state().dupacks == d);
  }
  CHECK(retransmits == 1);
  CHECK(s.loss_events() == 1);
  CHECK(s.state().in_recovery);
  CHECK(s.state().cwnd == 11 * kMss / 2);  // slow start reached 11 MSS before the loss
}

TEST_CASE("retransmission timeout goes back to the cumulative ack with one MSS") {
  Sender s = make(Cca::kCubic);
  s.start(SimTime{});
  s.on_ack(ack_for(2 * kMss, SimTime{}), milliseconds(100));
  const auto wake = s.next_wakeup();
  REQUIRE(wake);
  CHECK(*wake == milliseconds(100) + s.state().rtt.rto);
  CHECK(s.on_timer(*wake - sim::nanoseconds(1)).empty());
  const auto out = s.on_timer(*wake);
  REQUIRE(out.size() == 1);
  CHECK(out[0].seq_start == 2 * kMss);
  CHECK(out[0].retransmit);
  CHECK(s.state().cwnd == kMss);
  CHECK(s.timeouts() == 1);
}

TEST_CASE("rtt estimator follows RFC 6298 with a 200 ms floor") {
  RttEstimator e;
  CHECK(e.rto == seconds(1));
  e.sample(milliseconds(100));
  CHECK(*e.srtt == milliseconds(100));
  CHECK(e.rttvar == milliseconds(50));
  CHECK(e.rto == milliseconds(300));
  e.sample(milliseconds(20));
  CHECK(*e.srtt == milliseconds(90));   // 7/8 * 100 + 1/8 * 20
  CHECK(e.rttvar == milliseconds(57) + sim::microseconds(500));  // 3/4 * 50 + 1/4 * 80
  CHECK(e.min_rtt == milliseconds(20));
  RttEstimator f;
  f.sample(milliseconds(10));
  CHECK(f.rto == milliseconds(200));
}

TEST_CASE("an ack beyond anything sent is a logic error") {
  Sender s = make(Cca::kReno);
  s.start(SimTime{});
  CHECK_THROWS_AS(s.on_ack(ack_for(11 * kMss, SimTime{}), milliseconds(1)), std::logic_error);
  Packet data;
  CHECK_THROWS_AS(s.on_ack(data, milliseconds(1)), std::logic_error);
}

TEST_CASE("bbr: a loss leaves cwnd and pacing untouched") {
  Sender s = make(Cca::kBbr);
  s.start(SimTime{});
  const auto cwnd = s.state().cwnd;
  const auto pacing = s.bbr()->pacing_rate;
  s.on_loss(milliseconds(5), LossSignal::kDupAcks);
  CHECK(s.state().cwnd == cwnd);
  CHECK(s.bbr()->pacing_rate == pacing);
}

TEST_CASE("bbr paces: only the first packet leaves at start") {
  Sender s = make(Cca::kBbr);
  const auto out = s.start(SimTime{});
  CHECK(out.size() == 1);
  const auto wake = s.next_wakeup();
  REQUIRE(wake);
  CHECK(*wake > SimTime{});
  CHECK(s.on_timer(*wake).size() == 1);
}

TEST_CASE("bbr gain cycle draws are rotations that never start with 3/4") {
  sim::Rng rng(11);
  std::set<double> firsts;
  for (int i = 0; i < 10'000; ++i) {
    const auto c = bbr_draw_cycle(rng);
    CHECK(c[0] != 0.75);
    firsts.insert(c[0]);
    // Exactly one 5/4, cyclically followed by the single 3/4; the rest are 1.
    CHECK(std::count(c.begin(), c.end(), 1.25) == 1);
    CHECK(std::count(c.begin(), c.end(), 0.75) == 1);
    const auto up = static_cast<std::size_t>(std::find(c.begin(), c.end(), 1.25) - c.begin());
    CHECK(c[(up + 1) % 8] == 0.75);
    CHECK(std::accumulate(c.begin(), c.end(), 0.0) == doctest::Approx(8.0));
  }
  CHECK(firsts == std::set<double>{1.0, 1.25});
}

TEST_CASE("bbr phases apply gain x btl_bw and redraw on wrap") {
  sim::Rng rng(5);
  BbrState st;
  st.btl_bw = 50e6;
  bbr_enter_probe_bw(st, SimTime{}, rng);
  CHECK(st.mode == BbrMode::kProbeBw);
  CHECK(st.cwnd_gain == kBbrCwndGain);
  CHECK(st.pacing_rate == st.cycle[0] * 50e6);
  bool saw_probe = st.pacing_gain == 1.25;
  double gain_sum = st.pacing_gain;
  for (int i = 1; i < 8; ++i) {
    bbr_advance_phase(st, milliseconds(10 * i), rng);
    CHECK(st.phase_start == milliseconds(10 * i));
    gain_sum += st.pacing_gain;
    if (st.pacing_gain == 1.25) {
      saw_probe = true;
      CHECK(st.pacing_rate == doctest::Approx(62.5e6));
    }
  }
  CHECK(saw_probe);
  CHECK(gain_sum / 8 == doctest::Approx(1.0));
  bbr_advance_phase(st, milliseconds(80), rng);
  CHECK(st.cycle_index == 0);
  CHECK(st.cycle[0] != 0.75);
}

TEST_CASE("bbr bandwidth filter keeps the max over its round window") {
  MaxBwFilter f(10);
  f.update(0, 10e6);
  f.update(1, 30e6);
  f.update(2, 20e6);
  CHECK(f.best() == 30e6);
  f.update(10, 5e6);
  CHECK(f.best() == 30e6);
  f.update(11, 5e6);  // round 1 has aged out
  CHECK(f.best() == 20e6);
  f.update(12, 5e6);
  CHECK(f.best() == 5e6);
}

TEST_CASE("receiver: cumulative acks over gaps") {
  Receiver r(3);
  auto seg = [](int i, SimTime ts) {
    Packet p;
    p.flow = 3;
    p.id = static_cast<std::uint64_t>(i);
    p.seq_start = i * kMss;
    p.seq_end = (i + 1) * kMss;
    p.size_bytes = net::kMtu;
    p.ts_echo = ts;
    return p;
  };
  auto a = r.on_data(seg(0, milliseconds(1)), milliseconds(6));
  CHECK(a.is_ack);
  CHECK(a.size_bytes == net::kHeaderBytes);
  CHECK(a.ack_seq == kMss);
  CHECK(a.ts_echo == milliseconds(1));
  CHECK(a.echo_id == 0);
  CHECK(a.flow == 3);

  a = r.on_data(seg(2, milliseconds(3)), milliseconds(8));  // gap at segment 1
  CHECK(a.ack_seq == kMss);
  CHECK(a.ts_echo == milliseconds(3));
  a = r.on_data(seg(3, milliseconds(4)), milliseconds(9));
  CHECK(a.ack_seq == kMss);
  CHECK(r.out_of_order_runs() == 2);

  a = r.on_data(seg(1, milliseconds(5)), milliseconds(10));  // fills the gap
  CHECK(a.ack_seq == 4 * kMss);
  CHECK(r.out_of_order_runs() == 0);
  a = r.on_data(seg(1, milliseconds(6)), milliseconds(11));  // stale duplicate
  CHECK(a.ack_seq == 4 * kMss);
  CHECK(r.data_packets() == 5);
}

TEST_CASE("closed loop without loss: flight stays within cwnd + 1 MSS") {
  for (Cca cca : {Cca::kReno, Cca::kCubic}) {
    Sender s = make(cca);
    Receiver r(0);
    std::deque<std::pair<SimTime, Packet>> pipe;  // fixed 10 ms path
    SimTime now;
    for (const auto& p : s.start(now)) pipe.emplace_back(now + milliseconds(10), p);
    for (int step = 0; step < 5000 && !pipe.empty(); ++step) {
      auto [at, p] = pipe.front();
      pipe.pop_front();
      now = at;
      const Packet ack = r.on_data(p, now);
      for (const auto& q : s.on_ack(ack, now)) pipe.emplace_back(now + milliseconds(10), q);
      CHECK(s.state().next_seq - s.state().highest_acked <= s.state().cwnd + kMss);
    }
    CHECK(s.retransmissions() == 0);
    CHECK(s.state().rtt.min_rtt == milliseconds(10));
  }
}
