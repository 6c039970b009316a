#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cocoa/net/packet.hpp"
#include "cocoa/net/rate_schedule.hpp"

namespace cocoa::metrics {

using net::FlowId;
using sim::SimTime;

inline constexpr SimTime kThroughputBin = sim::milliseconds(100);

struct RttSample {
  SimTime time;
  FlowId flow = 0;
  double rtt_ms = 0;
};

struct BufferSample {
  SimTime time;
  FlowId flow = 0;
  std::int64_t buffer_pkts = 0;
  std::int64_t occupancy = 0;
};

/// Delivered payload per flow in fixed 100 ms bins over [0, duration).
class ThroughputSeries {
 public:
  explicit ThroughputSeries(SimTime duration);

  void add_flow(FlowId flow);
  /// A delivery at exactly `duration` lands in the last bin.
  void record(FlowId flow, SimTime t, std::int64_t payload_bytes);

  std::size_t bin_count() const { return bin_count_; }
  const std::map<FlowId, std::vector<std::int64_t>>& bins() const { return bins_; }
  std::int64_t total() const;
  std::int64_t total(FlowId flow) const;
  /// Bytes in bins whose start lies in [from, to).
  std::int64_t bytes_between(SimTime from, SimTime to) const;

 private:
  std::size_t bin_count_;
  std::map<FlowId, std::vector<std::int64_t>> bins_;
};

struct DropCounts {
  std::uint64_t tail = 0;
  std::uint64_t codel = 0;
  std::uint64_t cocoa_shrink = 0;
  std::uint64_t total() const { return tail + codel + cocoa_shrink; }
};

struct FlowSummary {
  FlowId flow = 0;
  std::string cca;
  std::int64_t delivered_bytes = 0;
  double mean_rtt_ms = 0;
  std::size_t rtt_samples = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t timeouts = 0;
  DropCounts drops;
};

struct RunSummary {
  double utilization_pct = 0;
  double mean_rtt_ms = 0;
  std::int64_t total_delivered = 0;  // payload bytes
  DropCounts drops;
  std::vector<FlowSummary> flows;

  double total_mb() const { return static_cast<double>(total_delivered) / 1e6; }
};

/// Everything a run records, in event order.
struct RunSeries {
  explicit RunSeries(SimTime duration) : throughput(duration) {}

  ThroughputSeries throughput;
  std::vector<RttSample> rtt;
  std::vector<BufferSample> buffer;
};

/// Delivered payload as a percentage of the capacity integral over [0, duration).
double utilization(std::int64_t delivered_payload, const net::RateSchedule& schedule,
                   SimTime duration);

/// Same, over the window [from, to).
double utilization(std::int64_t delivered_payload, const net::RateSchedule& schedule,
                   SimTime from, SimTime to);

/// Arithmetic mean in ms. Throws std::invalid_argument on an empty series.
double mean_rtt(std::span<const RttSample> samples);

/// Nearest-rank percentile (p in (0, 100]) of samples with time in [from, to).
/// Throws std::invalid_argument if no sample falls in the window.
double percentile_rtt(std::span<const RttSample> samples, double p, SimTime from, SimTime to);

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes throughput.csv, rtt.csv, buffer.csv and summary.txt into `dir`,
/// creating it if needed. Throws ExportError naming the path on failure.
void export_csv(const RunSeries& series, const RunSummary& summary,
                const std::filesystem::path& dir,
                const std::vector<std::pair<std::string, std::string>>& extra_summary = {});

}  // namespace cocoa::metrics
