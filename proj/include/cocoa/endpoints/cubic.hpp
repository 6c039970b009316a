#pragma once

#include <cstdint>

#include "cocoa/sim/time.hpp"

namespace cocoa::endpoints {

using sim::SimTime;

/// Cubic window state for one loss epoch. Windows are in bytes; the cubic
/// function itself works in MSS units as in the published design.
struct CubicState {
  static constexpr double kC = 0.4;
  static constexpr double kBeta = 0.7;

  std::int64_t w_max = 0;  // bytes, window just before the last reduction
  double k = 0;            // seconds until the window regains w_max
  SimTime epoch_start;
  std::int64_t ack_count = 0;  // segments acked since the last 1-MSS increment
};

/// Starts a new epoch at `now` after a reduction from `cwnd_before`.
void cubic_begin_epoch(CubicState& st, std::int64_t cwnd_before, std::int64_t mss, SimTime now);

/// w_max + C (t - K)^3, t = now - epoch_start, never below one MSS.
std::int64_t cubic_window(const CubicState& st, std::int64_t mss, SimTime now);

}  // namespace cocoa::endpoints
