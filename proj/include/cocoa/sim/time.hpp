#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

namespace cocoa::sim {

/// Virtual time in integer nanoseconds since the start of a run.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_ns(std::int64_t ns) { return SimTime{ns}; }
  static SimTime from_seconds(double s) { return SimTime{std::llround(s * 1e9)}; }
  static constexpr SimTime max() { return SimTime{std::numeric_limits<std::int64_t>::max()}; }

  constexpr std::int64_t ns() const { return ns_; }
  constexpr double seconds() const { return static_cast<double>(ns_) * 1e-9; }
  constexpr double ms() const { return static_cast<double>(ns_) * 1e-6; }

  /// Multiplies by a dimensionless factor, rounding to the nearest nanosecond.
  SimTime scaled(double factor) const {
    return SimTime{std::llround(static_cast<double>(ns_) * factor)};
  }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime& operator+=(SimTime o) {
    ns_ += o.ns_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    ns_ -= o.ns_;
    return *this;
  }
  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.ns_ + b.ns_}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.ns_ - b.ns_}; }

 private:
  constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}
  std::int64_t ns_ = 0;
};

constexpr SimTime nanoseconds(std::int64_t v) { return SimTime::from_ns(v); }
constexpr SimTime microseconds(std::int64_t v) { return SimTime::from_ns(v * 1'000); }
constexpr SimTime milliseconds(std::int64_t v) { return SimTime::from_ns(v * 1'000'000); }
constexpr SimTime seconds(std::int64_t v) { return SimTime::from_ns(v * 1'000'000'000); }

constexpr SimTime min(SimTime a, SimTime b) { return a < b ? a : b; }
constexpr SimTime max(SimTime a, SimTime b) { return a < b ? b : a; }

}  // namespace cocoa::sim
