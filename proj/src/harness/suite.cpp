#include "cocoa/harness/suite.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cocoa/harness/presets.hpp"
#include "cocoa/harness/simulation.hpp"

namespace cocoa::harness {
namespace {

std::filesystem::path run_dir(const std::filesystem::path& out, const Scenario& s) {
  std::string cell = s.name;
  std::replace(cell.begin(), cell.end(), '/', '_');
  return out / cell / fmt::format("seed-{}", s.seed);
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
  f.close();
  if (!f) throw metrics::ExportError("cannot write " + path.string());
}

}  // namespace

std::vector<SuiteCell> aggregate(const std::vector<SuiteRun>& runs) {
  std::vector<SuiteCell> cells;
  for (const auto& r : runs) {
    auto it = std::find_if(cells.begin(), cells.end(),
                           [&](const SuiteCell& c) { return c.cell == r.cell; });
    if (it == cells.end()) {
      cells.push_back({r.cell});
      it = std::prev(cells.end());
    }
    ++it->runs;
    it->utilization_pct += r.summary.utilization_pct;
    it->mean_rtt_ms += r.summary.mean_rtt_ms;
    it->total_mb += r.summary.total_mb();
  }
  for (auto& c : cells) {
    const auto n = static_cast<double>(c.runs);
    c.utilization_pct /= n;
    c.mean_rtt_ms /= n;
    c.total_mb /= n;
  }
  return cells;
}

SuiteReport run_suite(const std::vector<std::string>& names, int seeds,
                      const std::filesystem::path& out_dir, const SuiteOptions& options) {
  if (names.empty()) throw std::invalid_argument("no presets given");
  if (seeds < 1) throw std::invalid_argument("seeds must be >= 1");
  for (const auto& n : names) {
    if (!is_preset(n)) throw std::invalid_argument("unknown preset '" + n + "'");
  }

  // Cell-major job order so the report groups seeds of one cell together.
  std::vector<Scenario> jobs;
  for (const auto& n : names) {
    const std::size_t cells = expand_preset(n, 1).size();
    for (std::size_t c = 0; c < cells; ++c) {
      for (int seed = 1; seed <= seeds; ++seed) {
        jobs.push_back(expand_preset(n, static_cast<std::uint64_t>(seed))[c]);
      }
    }
  }

  SuiteReport report;
  report.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr first_error;
  std::size_t first_error_job = jobs.size();

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Scenario& s = jobs[i];
      try {
        metrics::RunSummary sum = options.write_runs ? run_scenario(s, run_dir(out_dir, s))
                                                     : simulate(s).summary;
        report.runs[i] = {s.name, s.seed, std::move(sum)};
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (i < first_error_job) {
          first_error_job = i;
          first_error = std::current_exception();
        }
      }
    }
  };

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(jobs.size()));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);

  report.cells = aggregate(report.runs);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw metrics::ExportError("cannot create " + out_dir.string() + ": " + ec.message());

  std::string runs_csv = "cell,seed,utilization_pct,mean_rtt_ms,total_mb,drops\n";
  for (const auto& r : report.runs) {
    runs_csv += fmt::format("{},{},{:.3f},{:.3f},{:.3f},{}\n", r.cell, r.seed,
                            r.summary.utilization_pct, r.summary.mean_rtt_ms, r.summary.total_mb(),
                            r.summary.drops.total());
  }
  std::string suite_csv = "cell,runs,utilization_pct,mean_rtt_ms,total_mb\n";
  std::string suite_txt = fmt::format("{:<28} {:>5} {:>10} {:>12} {:>10}\n", "cell", "runs",
                                      "util %", "RTT ms", "MB");
  for (const auto& c : report.cells) {
    suite_csv += fmt::format("{},{},{:.3f},{:.3f},{:.3f}\n", c.cell, c.runs, c.utilization_pct,
                             c.mean_rtt_ms, c.total_mb);
    suite_txt += fmt::format("{:<28} {:>5} {:>10.1f} {:>12.2f} {:>10.1f}\n", c.cell, c.runs,
                             c.utilization_pct, c.mean_rtt_ms, c.total_mb);
  }
  write_text(out_dir / "runs.csv", runs_csv);
  write_text(out_dir / "suite.csv", suite_csv);
  write_text(out_dir / "suite.txt", suite_txt);
  return report;
}

}  // namespace cocoa::harness
