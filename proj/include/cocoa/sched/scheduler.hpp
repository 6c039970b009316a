#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "cocoa/net/packet.hpp"

namespace cocoa::sched {

using net::FlowId;
using net::Packet;
using sim::SimTime;

enum class DropCause : std::uint8_t { kTail, kCodel, kCocoaShrink };

std::string_view to_string(DropCause cause);

struct DroppedPacket {
  Packet packet;
  DropCause cause = DropCause::kTail;
};

struct EnqueueOutcome {
  bool accepted = false;
  std::vector<DroppedPacket> dropped;  // never contains the incoming packet if accepted
};

enum class TraceKind : std::uint8_t { kAccept, kDrop, kEnlarge, kShrink, kGiStart };

/// One row of the optional scheduler trace.
struct TraceEvent {
  SimTime time;
  FlowId flow = 0;
  TraceKind kind = TraceKind::kAccept;
  std::int64_t delta = 0;  // packets added (enlarge) or removed (shrink)
  std::int64_t buffer_size = 0;
  std::int64_t occupancy = 0;
};

/// "accept", "drop", "enlarge(+n)", "shrink(-n)" or "gi_start".
std::string format_trace_kind(const TraceEvent& ev);

using DropCallback = std::function<void(const Packet&, DropCause, SimTime)>;
using TraceSink = std::function<void(const TraceEvent&)>;

/// Callbacks a per-flow queue may fire outside of the enqueue return path.
struct FlowHooks {
  const DropCallback* head_drop = nullptr;
  const TraceSink* trace = nullptr;

  void drop(const Packet& p, DropCause cause, SimTime now) const {
    if (head_drop != nullptr && *head_drop) (*head_drop)(p, cause, now);
  }
  void emit(const TraceEvent& ev) const {
    if (trace != nullptr && *trace) (*trace)(ev);
  }
  bool tracing() const { return trace != nullptr && static_cast<bool>(*trace); }
};

/// Common contract for the bottleneck queueing disciplines. Per-flow FIFO;
/// dequeue only returns packets that were accepted and not dropped since.
class Scheduler {
 public:
  virtual ~Scheduler() = default;

  virtual EnqueueOutcome enqueue(Packet pkt, SimTime now) = 0;
  virtual std::optional<Packet> dequeue(SimTime now) = 0;
  virtual std::size_t occupancy(FlowId flow) const = 0;
  virtual std::size_t backlog() const = 0;
  virtual std::string_view name() const = 0;

  /// Drops decided during dequeue (CoDel head drops).
  void set_head_drop_callback(DropCallback cb) { head_drop_ = std::move(cb); }
  void set_trace_sink(TraceSink sink) { trace_ = std::move(sink); }

 protected:
  FlowHooks hooks() const { return FlowHooks{&head_drop_, &trace_}; }

 private:
  DropCallback head_drop_;
  TraceSink trace_;
};

}  // namespace cocoa::sched
