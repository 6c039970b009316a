#include "cocoa/metrics/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace cocoa::metrics {

ThroughputSeries::ThroughputSeries(SimTime duration)
    : bin_count_(static_cast<std::size_t>((duration.ns() + kThroughputBin.ns() - 1) /
                                          kThroughputBin.ns())) {}

void ThroughputSeries::add_flow(FlowId flow) { bins_.try_emplace(flow, bin_count_, 0); }

void ThroughputSeries::record(FlowId flow, SimTime t, std::int64_t payload_bytes) {
  auto& bins = bins_.try_emplace(flow, bin_count_, 0).first->second;
  if (bins.empty()) return;
  auto idx = static_cast<std::size_t>(t.ns() / kThroughputBin.ns());
  idx = std::min(idx, bins.size() - 1);
  bins[idx] += payload_bytes;
}

std::int64_t ThroughputSeries::total() const {
  std::int64_t sum = 0;
  for (const auto& [flow, bins] : bins_) sum += std::accumulate(bins.begin(), bins.end(), std::int64_t{0});
  return sum;
}

std::int64_t ThroughputSeries::total(FlowId flow) const {
  auto it = bins_.find(flow);
  if (it == bins_.end()) return 0;
  return std::accumulate(it->second.begin(), it->second.end(), std::int64_t{0});
}

std::int64_t ThroughputSeries::bytes_between(SimTime from, SimTime to) const {
  std::int64_t sum = 0;
  for (const auto& [flow, bins] : bins_) {
    for (std::size_t i = 0; i < bins.size(); ++i) {
      const SimTime start = SimTime::from_ns(static_cast<std::int64_t>(i) * kThroughputBin.ns());
      if (start >= from && start < to) sum += bins[i];
    }
  }
  return sum;
}

double utilization(std::int64_t delivered_payload, const net::RateSchedule& schedule,
                   SimTime duration) {
  return utilization(delivered_payload, schedule, SimTime{}, duration);
}

double utilization(std::int64_t delivered_payload, const net::RateSchedule& schedule,
                   SimTime from, SimTime to) {
  const double capacity = schedule.capacity_bits(from, to);
  if (!(capacity > 0)) throw std::invalid_argument("utilization over an empty window");
  return static_cast<double>(delivered_payload) * 8.0 / capacity * 100.0;
}

double mean_rtt(std::span<const RttSample> samples) {
  if (samples.empty()) throw std::invalid_argument("mean_rtt of an empty series");
  double sum = 0;
  for (const auto& s : samples) sum += s.rtt_ms;
  return sum / static_cast<double>(samples.size());
}

double percentile_rtt(std::span<const RttSample> samples, double p, SimTime from, SimTime to) {
  std::vector<double> window;
  for (const auto& s : samples) {
    if (s.time >= from && s.time < to) window.push_back(s.rtt_ms);
  }
  if (window.empty()) throw std::invalid_argument("percentile_rtt: no samples in window");
  const auto n = static_cast<double>(window.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, window.size());
  std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   window.end());
  return window[rank - 1];
}

namespace {

class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw ExportError("cannot open " + path.string() + " for writing");
  }

  fmt::memory_buffer& buffer() { return buf_; }

  void flush_if_large() {
    if (buf_.size() > (1u << 20)) flush();
  }

  void close() {
    flush();
    out_.close();
    if (!out_) throw ExportError("error writing " + path_.string());
  }

 private:
  void flush() {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
    if (!out_) throw ExportError("error writing " + path_.string());
  }

  std::filesystem::path path_;
  std::ofstream out_;
  fmt::memory_buffer buf_;
};

}  // namespace

void export_csv(const RunSeries& series, const RunSummary& summary,
                const std::filesystem::path& dir,
                const std::vector<std::pair<std::string, std::string>>& extra_summary) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ExportError("cannot create directory " + dir.string() + ": " + ec.message());

  {
    CsvFile f(dir / "throughput.csv");
    fmt::format_to(std::back_inserter(f.buffer()), "t_s,flow,bytes\n");
    const auto& bins = series.throughput.bins();
    for (std::size_t i = 0; i < series.throughput.bin_count(); ++i) {
      const double t = static_cast<double>(i) * kThroughputBin.seconds();
      for (const auto& [flow, values] : bins) {
        fmt::format_to(std::back_inserter(f.buffer()), "{:.1f},{},{}\n", t, flow, values[i]);
      }
      f.flush_if_large();
    }
    f.close();
  }
  {
    CsvFile f(dir / "rtt.csv");
    fmt::format_to(std::back_inserter(f.buffer()), "t_s,flow,rtt_ms\n");
    for (const auto& s : series.rtt) {
      fmt::format_to(std::back_inserter(f.buffer()), "{:.6f},{},{:.3f}\n", s.time.seconds(),
                     s.flow, s.rtt_ms);
      f.flush_if_large();
    }
    f.close();
  }
  {
    CsvFile f(dir / "buffer.csv");
    fmt::format_to(std::back_inserter(f.buffer()), "t_s,flow,buffer_pkts,occupancy\n");
    for (const auto& s : series.buffer) {
      fmt::format_to(std::back_inserter(f.buffer()), "{:.6f},{},{},{}\n", s.time.seconds(),
                     s.flow, s.buffer_pkts, s.occupancy);
      f.flush_if_large();
    }
    f.close();
  }
  {
    CsvFile f(dir / "summary.txt");
    auto out = std::back_inserter(f.buffer());
    fmt::format_to(out, "utilization_pct = {:.3f}\n", summary.utilization_pct);
    fmt::format_to(out, "mean_rtt_ms = {:.3f}\n", summary.mean_rtt_ms);
    fmt::format_to(out, "total_mb = {:.3f}\n", summary.total_mb());
    fmt::format_to(out, "drops_tail = {}\n", summary.drops.tail);
    fmt::format_to(out, "drops_codel = {}\n", summary.drops.codel);
    fmt::format_to(out, "drops_cocoa = {}\n", summary.drops.cocoa_shrink);
    for (const auto& fl : summary.flows) {
      fmt::format_to(out, "flow.{}.cca = {}\n", fl.flow, fl.cca);
      fmt::format_to(out, "flow.{}.delivered_mb = {:.3f}\n", fl.flow,
                     static_cast<double>(fl.delivered_bytes) / 1e6);
      fmt::format_to(out, "flow.{}.mean_rtt_ms = {:.3f}\n", fl.flow, fl.mean_rtt_ms);
      fmt::format_to(out, "flow.{}.rtt_samples = {}\n", fl.flow, fl.rtt_samples);
      fmt::format_to(out, "flow.{}.retransmissions = {}\n", fl.flow, fl.retransmissions);
      fmt::format_to(out, "flow.{}.timeouts = {}\n", fl.flow, fl.timeouts);
      fmt::format_to(out, "flow.{}.drops = {}\n", fl.flow, fl.drops.total());
    }
    for (const auto& [key, value] : extra_summary) fmt::format_to(out, "{} = {}\n", key, value);
    f.close();
  }
}

}  // namespace cocoa::metrics
