#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cocoa/sim/time.hpp"

namespace cocoa::sim {

enum class EventKind : std::uint8_t {
  kPacketArrival,
  kTransmitComplete,
  kDelivery,
  kTimer,
  kRateChange,
  kFlowStart,
};

std::string_view to_string(EventKind kind);

template <class Payload>
struct Event {
  SimTime fire_time;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kTimer;
  std::uint32_t flow = 0;
  Payload payload{};
};

/// Thrown when an event is scheduled before the current clock. This is a bug in
/// the caller, not a modeled outcome, and aborts the run.
class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Single-threaded discrete-event engine. Events are dispatched in
/// (fire_time, seq) order, seq being a monotone insertion counter.
template <class Payload>
class Engine {
 public:
  using EventType = Event<Payload>;
  using Handler = std::function<void(EventType&)>;

  SimTime now() const { return now_; }
  std::uint64_t dispatched() const { return dispatched_; }
  std::size_t pending() const { return queue_.size(); }

  /// Dispatch log: one "time_ns,kind,flow" line per event. Pass nullptr to disable.
  void set_log(std::ostream* log) { log_ = log; }

  void schedule(SimTime at, EventKind kind, std::uint32_t flow, Payload payload = {}) {
    if (at < now_) {
      throw SchedulingError("event scheduled at " + std::to_string(at.ns()) +
                            " ns, before current time " + std::to_string(now_.ns()) + " ns");
    }
    queue_.push_back(EventType{at, next_seq_++, kind, flow, std::move(payload)});
    std::push_heap(queue_.begin(), queue_.end(), Later{});
  }

  /// Dispatches every event with fire_time <= end, then sets the clock to end.
  void run_until(SimTime end, const Handler& handler) {
    while (!queue_.empty() && queue_.front().fire_time <= end) {
      std::pop_heap(queue_.begin(), queue_.end(), Later{});
      EventType ev = std::move(queue_.back());
      queue_.pop_back();
      now_ = ev.fire_time;
      ++dispatched_;
      if (log_ != nullptr) {
        *log_ << ev.fire_time.ns() << ',' << to_string(ev.kind) << ',' << ev.flow << '\n';
      }
      handler(ev);
    }
    if (now_ < end) now_ = end;
  }

 private:
  struct Later {
    bool operator()(const EventType& a, const EventType& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.seq > b.seq;
    }
  };

  // Binary heap ordered by Later; front() is the next event.
  std::vector<EventType> queue_;
  SimTime now_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  std::ostream* log_ = nullptr;
};

inline std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kPacketArrival:
      return "packet-arrival";
    case EventKind::kTransmitComplete:
      return "transmit-complete";
    case EventKind::kDelivery:
      return "delivery";
    case EventKind::kTimer:
      return "timer";
    case EventKind::kRateChange:
      return "rate-change";
    case EventKind::kFlowStart:
      return "flow-start";
  }
  return "unknown";
}

}  // namespace cocoa::sim
