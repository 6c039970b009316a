#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>

#include "cocoa/sched/fair_queue.hpp"

namespace cocoa::sched {

struct CocoaParams {
  double multiplier = 1.25;          // GI minimum = multiplier x previous LI
  double max_increase_factor = 2.0;  // one enlargement may at most scale the buffer by this
  SimTime max_gi = sim::seconds(1);
  std::int64_t initial_buffer = 100;  // packets
  std::int64_t buffer_floor = 1;      // packets

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Counters for the interval currently open on a flow.
struct IntervalStats {
  SimTime start;
  std::int64_t packets_transmitted = 0;
  std::int64_t min_occupancy = 0;
  SimTime idle_time;
  std::optional<SimTime> empty_since;
  bool enlarged = false;
};

/// Packets the flow could have sent while its queue sat empty, extrapolated
/// from its transmit rate while it was backlogged. Zero when the interval has
/// been active for under 1 ms.
std::int64_t compute_increase(const IntervalStats& s, SimTime now);

/// Which arm of the enqueue decision was taken.
enum class CocoaBranch : std::uint8_t {
  kAccept,     // room in the buffer
  kEnlarge,    // full, but the flow idled this interval: grow and accept
  kRestartGi,  // full after an enlargement or on the first interval: new GI, drop
  kShrink,     // full after the GI minimum elapsed: remove the standing queue, new GI, drop
  kDrop,       // full inside the GI: new interval, drop
};

/// Per-flow queue with an adaptive buffer. The buffer grows when the flow's
/// queue ran dry between drops and shrinks by the standing queue observed in
/// the longest drop-free interval of each guard interval (GI).
class CocoaFlowQueue {
 public:
  CocoaFlowQueue(CocoaParams params, FlowId flow);

  EnqueueOutcome enqueue(Packet pkt, SimTime now, const FlowHooks& hooks);
  std::optional<Packet> dequeue(SimTime now, const FlowHooks& hooks);

  std::size_t size() const { return queue_.size(); }
  std::int64_t occupancy() const { return static_cast<std::int64_t>(queue_.size()); }
  std::int64_t buffer_size() const { return buffer_size_; }
  const IntervalStats& interval() const { return cur_; }
  bool is_first_interval() const { return is_first_interval_; }
  SimTime gi_start() const { return gi_start_; }
  SimTime gi_min_end() const { return gi_min_end_; }
  SimTime li_duration() const { return li_duration_; }
  std::int64_t li_min_occupancy() const { return li_min_occupancy_; }
  const CocoaParams& params() const { return params_; }

  std::optional<CocoaBranch> last_branch() const { return last_branch_; }
  std::uint64_t intervals_closed() const { return intervals_closed_; }
  std::uint64_t drop_decisions() const { return drop_decisions_; }
  std::uint64_t enlargements() const { return enlargements_; }
  std::uint64_t shrinks() const { return shrinks_; }

  /// Ends the open interval at `now`; it becomes the LI if strictly longer.
  void close_interval(SimTime now);
  /// Opens a GI at `now` sized from the LI of the GI that just ended.
  void start_gi(SimTime now);

 private:
  void sample_occupancy();
  void end_idle_span(SimTime now);
  void trace(const FlowHooks& hooks, SimTime now, TraceKind kind, std::int64_t delta) const;
  void begin(SimTime now);

  CocoaParams params_;
  FlowId flow_;
  std::int64_t buffer_size_;
  std::deque<Packet> queue_;
  bool started_ = false;  // the first interval opens with the first packet
  IntervalStats cur_;
  bool is_first_interval_ = true;
  SimTime gi_start_;
  SimTime gi_min_end_;
  SimTime li_duration_;
  std::int64_t li_min_occupancy_ = 0;

  std::optional<CocoaBranch> last_branch_;
  std::uint64_t intervals_closed_ = 0;
  std::uint64_t drop_decisions_ = 0;
  std::uint64_t enlargements_ = 0;
  std::uint64_t shrinks_ = 0;
};

using CocoaScheduler = FairQueue<CocoaFlowQueue>;

std::unique_ptr<CocoaScheduler> make_cocoa(CocoaParams params = {},
                                           std::int32_t quantum = net::kMtu);

}  // namespace cocoa::sched
