#pragma once

#include <cstdint>
#include <vector>

#include "cocoa/sim/time.hpp"

namespace cocoa::net {

using sim::SimTime;

struct RateStep {
  SimTime start;
  double bits_per_second = 0;
};

/// Piecewise-constant bottleneck capacity. Each step applies from its start
/// time (inclusive) until the next step begins.
class RateSchedule {
 public:
  /// Throws std::invalid_argument unless steps are non-empty, strictly
  /// increasing in start, begin at t = 0, and have positive rates.
  explicit RateSchedule(std::vector<RateStep> steps);

  static RateSchedule constant(double bits_per_second) {
    return RateSchedule({{SimTime{}, bits_per_second}});
  }

  double rate_at(SimTime t) const;

  /// Integral of the rate over [from, to) in bits.
  double capacity_bits(SimTime from, SimTime to) const;

  const std::vector<RateStep>& steps() const { return steps_; }

 private:
  std::vector<RateStep> steps_;
};

}  // namespace cocoa::net
