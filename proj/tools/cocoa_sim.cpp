// Command-line entry point: run one scenario file, run preset suites, or list
// the presets.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <exception>
#include <string>
#include <vector>

#include "cocoa/harness/presets.hpp"
#include "cocoa/harness/scenario.hpp"
#include "cocoa/harness/simulation.hpp"
#include "cocoa/harness/suite.hpp"

namespace {

using namespace cocoa;

int run_command(const std::string& file, const std::string& out, std::optional<std::uint64_t> seed,
                bool log_events, bool trace) {
  harness::Scenario s = harness::load_scenario(file);
  if (seed) s.seed = *seed;
  const metrics::RunSummary sum = harness::run_scenario(s, out, log_events, trace);
  fmt::print("{}: utilization {:.2f}%  mean RTT {:.2f} ms  delivered {:.1f} MB  drops {}\n",
             s.name.empty() ? file : s.name, sum.utilization_pct, sum.mean_rtt_ms, sum.total_mb(),
             sum.drops.total());
  return 0;
}

int suite_command(const std::vector<std::string>& names, int seeds, const std::string& out,
                  unsigned threads) {
  const harness::SuiteReport report = harness::run_suite(names, seeds, out, {threads, true});
  for (const auto& c : report.cells) {
    fmt::print("{:<28} runs {:>3}  utilization {:6.2f}%  RTT {:8.2f} ms  {:8.1f} MB\n", c.cell,
               c.runs, c.utilization_pct, c.mean_rtt_ms, c.total_mb);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic bottleneck simulator for fq, fq_codel and cocoa"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool log_events = false;
  bool trace = false;
  auto* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("--scenario", scenario_file, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_flag("--log-events", log_events, "Write events.csv (every dispatched event)");
  run->add_flag("--trace", trace, "Write trace.csv (scheduler decisions)");

  std::vector<std::string> presets;
  int seeds = 1;
  std::string suite_out;
  unsigned threads = 0;
  auto* suite = app.add_subcommand("suite", "Run preset experiments over seeds 1..N");
  suite->add_option("--preset", presets, "Preset name(s), comma separated")
      ->required()
      ->delimiter(',');
  suite->add_option("--seeds", seeds, "Number of seeds")->check(CLI::PositiveNumber);
  suite->add_option("--out", suite_out, "Output directory")->required();
  suite->add_option("--threads", threads, "Worker threads (default: all cores)");

  auto* list = app.add_subcommand("list-presets", "List the preset experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version are "errors" with a zero exit code.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) return run_command(scenario_file, out_dir, seed, log_events, trace);
    if (*suite) return suite_command(presets, seeds, suite_out, threads);
    if (*list) {
      for (const auto& p : harness::list_presets()) {
        fmt::print("{:<14} {} (default seeds: {})\n", p.name, p.description, p.default_seeds);
      }
      return 0;
    }
  } catch (const harness::ScenarioError& e) {
    fmt::print(stderr, "{}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}
