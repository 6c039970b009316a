#pragma once

// Randomized invariant checks shared by the unit tests and the acceptance
// binary. Each property reports the first counterexample it finds.

#include <cstdint>
#include <string>
#include <vector>

namespace cocoa::testing {

struct PropertyBudget {
  int cocoa_traces = 300;     // random single-flow cocoa traces
  int trace_ops = 3000;       // operations per trace
  int scheduler_traces = 60;  // multi-flow traces per qdisc
  int bbr_draws = 10000;
  int equivalence_traces = 50;  // huge-floor cocoa vs fq oracle, 10^3 packets each
  int conservation_runs = 12;   // short end-to-end simulations
  std::uint64_t seed = 20240611;
};

struct PropertyResult {
  std::string name;
  bool pass = true;
  std::string detail;  // counterexample, or a short summary of what was covered
};

std::vector<PropertyResult> run_property_suite(const PropertyBudget& budget);

// Individual properties, for targeted unit tests.
PropertyResult check_cocoa_branch_invariants(const PropertyBudget& budget);
PropertyResult check_bbr_rotation(const PropertyBudget& budget);
PropertyResult check_drr_shares(const PropertyBudget& budget);
PropertyResult check_scheduler_fifo_and_bounds(const PropertyBudget& budget);
PropertyResult check_conservation(const PropertyBudget& budget);
PropertyResult check_huge_floor_equivalence(const PropertyBudget& budget);

}  // namespace cocoa::testing
