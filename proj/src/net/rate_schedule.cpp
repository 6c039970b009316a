#include "cocoa/net/rate_schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace cocoa::net {

RateSchedule::RateSchedule(std::vector<RateStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw std::invalid_argument("rate schedule has no steps");
  if (steps_.front().start != SimTime{}) {
    throw std::invalid_argument("rate schedule must start at t = 0");
  }
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (!(steps_[i].bits_per_second > 0)) {
      throw std::invalid_argument("rate schedule step " + std::to_string(i) +
                                  " has a non-positive rate");
    }
    if (i > 0 && steps_[i].start <= steps_[i - 1].start) {
      throw std::invalid_argument("rate schedule step " + std::to_string(i) +
                                  " does not start after the previous step");
    }
  }
}

double RateSchedule::rate_at(SimTime t) const {
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](SimTime v, const RateStep& s) { return v < s.start; });
  // The first step starts at 0, so for t >= 0 there is always a predecessor.
  if (it == steps_.begin()) return steps_.front().bits_per_second;
  return std::prev(it)->bits_per_second;
}

double RateSchedule::capacity_bits(SimTime from, SimTime to) const {
  if (to <= from) return 0.0;
  double bits = 0.0;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const SimTime lo = sim::max(from, steps_[i].start);
    const SimTime hi = i + 1 < steps_.size() ? sim::min(to, steps_[i + 1].start) : to;
    if (hi > lo) bits += steps_[i].bits_per_second * (hi - lo).seconds();
  }
  return bits;
}

}  // namespace cocoa::net
