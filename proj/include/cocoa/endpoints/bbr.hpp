#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>

#include "cocoa/sim/rng.hpp"
#include "cocoa/sim/time.hpp"

namespace cocoa::endpoints {

using sim::SimTime;

enum class BbrMode : std::uint8_t { kStartup, kDrain, kProbeBw, kProbeRtt };

inline constexpr double kBbrHighGain = 2.885;  // 2 / ln 2
inline constexpr double kBbrDrainGain = 1.0 / kBbrHighGain;
inline constexpr double kBbrCwndGain = 2.0;
inline constexpr std::array<double, 8> kBbrGainPattern = {1.25, 0.75, 1, 1, 1, 1, 1, 1};
inline constexpr std::int64_t kBbrBwWindowRounds = 10;
inline constexpr SimTime kBbrMinRttWindow = sim::seconds(10);
inline constexpr SimTime kBbrProbeRttDuration = sim::milliseconds(200);

/// Windowed max of delivery-rate samples over the last N round trips.
class MaxBwFilter {
 public:
  MaxBwFilter() : MaxBwFilter(kBbrBwWindowRounds) {}
  explicit MaxBwFilter(std::int64_t window_rounds)
      : window_(window_rounds) {}
  void update(std::int64_t round, double bits_per_second);
  double best() const { return samples_.empty() ? 0.0 : samples_.front().second; }

 private:
  std::int64_t window_;
  // Monotone deque: rounds increasing, rates decreasing.
  std::deque<std::pair<std::int64_t, double>> samples_;
};

struct BbrState {
  BbrMode mode = BbrMode::kStartup;
  std::array<double, 8> cycle = kBbrGainPattern;
  std::size_t cycle_index = 0;
  SimTime phase_start;
  MaxBwFilter bw_filter;
  double btl_bw = 0;  // bits/s
  SimTime min_rtt = SimTime::max();
  SimTime min_rtt_stamp;
  double pacing_rate = 0;  // bits/s
  double pacing_gain = kBbrHighGain;
  double cwnd_gain = kBbrHighGain;

  // Round-trip counting on the delivered-bytes clock.
  std::int64_t round_count = 0;
  std::int64_t next_round_delivered = 0;
  bool round_start = false;

  // Startup exit: three rounds without 25% bandwidth growth.
  double full_bw = 0;
  int full_bw_count = 0;
  bool filled_pipe = false;

  std::optional<SimTime> probe_rtt_done;
  bool probe_rtt_round_done = false;
  std::int64_t prior_cwnd = 0;
};

/// Draws a rotation of the gain pattern uniformly among the seven that do not
/// start with 3/4.
std::array<double, 8> bbr_draw_cycle(sim::Rng& rng);

/// Enters probe_bw at `now` with a freshly drawn cycle.
void bbr_enter_probe_bw(BbrState& st, SimTime now, sim::Rng& rng);

/// Moves to the next gain phase; draws a new rotation when the cycle wraps.
void bbr_advance_phase(BbrState& st, SimTime now, sim::Rng& rng);

}  // namespace cocoa::endpoints
