#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "cocoa/harness/scenario.hpp"
#include "cocoa/metrics/metrics.hpp"
#include "cocoa/sched/scheduler.hpp"

namespace cocoa::harness {

struct RunOptions {
  std::ostream* event_log = nullptr;  // time_ns,kind,flow per dispatched event
  std::ostream* trace = nullptr;      // scheduler trace rows
};

/// Where every data packet a sender emitted currently is. Holds for the
/// whole run: sent == delivered + dropped + queued + in_service + propagating
/// + arriving.
struct PacketLedger {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t queued = 0;
  std::uint64_t in_service = 0;
  std::uint64_t propagating = 0;
  std::uint64_t arriving = 0;

  bool balanced() const {
    return sent == delivered + dropped + queued + in_service + propagating + arriving;
  }
};

struct RunResult {
  explicit RunResult(sim::SimTime duration) : series(duration) {}

  metrics::RunSummary summary;
  metrics::RunSeries series;
  PacketLedger ledger;
  std::vector<sched::TraceEvent> shrinks;  // cocoa only
  std::uint64_t enlargements = 0;
  std::uint64_t events = 0;
};

/// Runs the scenario to its duration without touching the filesystem.
RunResult simulate(const Scenario& s, const RunOptions& options = {});

/// simulate() + CSV export into `out_dir`. With `log_events`/`trace` set,
/// events.csv and trace.csv are written alongside.
metrics::RunSummary run_scenario(const Scenario& s, const std::filesystem::path& out_dir,
                                 bool log_events = false, bool trace = false);

}  // namespace cocoa::harness
