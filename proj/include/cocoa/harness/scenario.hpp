#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cocoa/endpoints/sender.hpp"
#include "cocoa/net/rate_schedule.hpp"
#include "cocoa/sched/cocoa.hpp"

namespace cocoa::harness {

enum class QdiscKind : std::uint8_t { kFq, kFqCodel, kCocoa };

std::string_view to_string(QdiscKind kind);
std::optional<QdiscKind> parse_qdisc(std::string_view name);

struct FlowSpec {
  endpoints::Cca cca = endpoints::Cca::kCubic;
  double start_s = 0;

  bool operator==(const FlowSpec&) const = default;
};

struct RateStepSpec {
  double start_s = 0;
  double mbps = 0;

  bool operator==(const RateStepSpec&) const = default;
};

/// One experiment: a single bottleneck, its qdisc, and the flows crossing it.
struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  double duration_s = 60;
  int mtu = net::kMtu;
  int mss = net::kMss;
  QdiscKind qdisc = QdiscKind::kCocoa;
  sched::CocoaParams cocoa;
  std::int64_t fq_limit = 100;
  double one_way_delay_ms = 5;
  std::vector<RateStepSpec> rates;
  std::vector<FlowSpec> flows;

  net::RateSchedule rate_schedule() const;
  sim::SimTime duration() const { return sim::SimTime::from_seconds(duration_s); }
  sim::SimTime one_way_delay() const { return sim::SimTime::from_seconds(one_way_delay_ms / 1e3); }

  /// Field-level problems, empty when the scenario is runnable.
  std::vector<std::string> validate() const;
};

bool operator==(const Scenario& a, const Scenario& b);

/// Carries every field-level error found while parsing or validating.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Parses the key = value scenario format (see README). Missing fields take
/// their defaults; throws ScenarioError listing all problems found.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::string& path);

/// Inverse of parse_scenario.
std::string to_text(const Scenario& s);

}  // namespace cocoa::harness
