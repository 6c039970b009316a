#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cocoa/metrics/metrics.hpp"

namespace cocoa::harness {

struct SuiteRun {
  std::string cell;
  std::uint64_t seed = 0;
  metrics::RunSummary summary;
};

/// Means over the seeds of one cell.
struct SuiteCell {
  std::string cell;
  std::size_t runs = 0;
  double utilization_pct = 0;
  double mean_rtt_ms = 0;  // mean over runs of each run's mean RTT
  double total_mb = 0;
};

struct SuiteReport {
  std::vector<SuiteRun> runs;    // cell-major, then seed
  std::vector<SuiteCell> cells;  // in preset order
};

struct SuiteOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  bool write_runs = true;
};

/// Runs every cell of every named preset for seeds 1..seeds, in parallel.
/// Writes <out>/<cell>/seed-<n>/ per run plus suite.csv, runs.csv and
/// suite.txt. Throws std::invalid_argument for an empty or unknown name
/// list; the first failing run's exception is rethrown once all runs end.
SuiteReport run_suite(const std::vector<std::string>& names, int seeds,
                      const std::filesystem::path& out_dir, const SuiteOptions& options = {});

/// Aggregates already-computed runs (exposed for testing).
std::vector<SuiteCell> aggregate(const std::vector<SuiteRun>& runs);

}  // namespace cocoa::harness
