#include "cocoa/harness/presets.hpp"

#include <algorithm>
#include <stdexcept>

namespace cocoa::harness {
namespace {

Scenario single_flow(std::string name, std::uint64_t seed, QdiscKind qdisc, endpoints::Cca cca,
                     double duration_s, double base_rtt_ms, std::vector<RateStepSpec> rates) {
  Scenario s;
  s.name = std::move(name);
  s.seed = seed;
  s.qdisc = qdisc;
  s.duration_s = duration_s;
  s.one_way_delay_ms = base_rtt_ms / 2;
  s.rates = std::move(rates);
  s.flows = {FlowSpec{cca, 0}};
  return s;
}

// `before` Mbit/s for 30 s, then `after`.
std::vector<RateStepSpec> step_at_30(double before, double after) {
  return {{0, before}, {30, after}};
}

}  // namespace

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> presets = {
      {"fig4_fq", "Cubic, fq, 20 Mbit/s halved at 30 s, 10 ms RTT, 60 s", 1},
      {"fig4_cocoa", "Cubic, cocoa, 20 Mbit/s halved at 30 s, 10 ms RTT, 60 s", 1},
      {"fig6_double", "Cubic, cocoa, 20 Mbit/s doubled at 30 s, 10 ms RTT, 60 s", 1},
      {"fig5_fqcodel", "Cubic, fq_codel, 100 Mbit/s, 100 ms RTT, 240 s", 1},
      {"fig5_cocoa", "Cubic, cocoa, 100 Mbit/s, 100 ms RTT, 240 s", 1},
      {"table1", "{Reno, Cubic} x {fq, fq_codel, cocoa}, 100 Mbit/s, 50 ms RTT, 240 s", 10},
      {"bbr", "BBR, cocoa, 50 Mbit/s halved at 30 s, 10 ms RTT, 60 s", 1},
  };
  return presets;
}

bool is_preset(std::string_view name) {
  const auto& all = list_presets();
  return std::any_of(all.begin(), all.end(), [&](const PresetInfo& p) { return p.name == name; });
}

std::vector<Scenario> expand_preset(std::string_view name, std::uint64_t seed) {
  using endpoints::Cca;
  if (name == "fig4_fq") {
    return {single_flow("fig4_fq", seed, QdiscKind::kFq, Cca::kCubic, 60, 10, step_at_30(20, 10))};
  }
  if (name == "fig4_cocoa") {
    return {single_flow("fig4_cocoa", seed, QdiscKind::kCocoa, Cca::kCubic, 60, 10,
                        step_at_30(20, 10))};
  }
  if (name == "fig6_double") {
    return {single_flow("fig6_double", seed, QdiscKind::kCocoa, Cca::kCubic, 60, 10,
                        step_at_30(20, 40))};
  }
  if (name == "fig5_fqcodel") {
    return {single_flow("fig5_fqcodel", seed, QdiscKind::kFqCodel, Cca::kCubic, 240, 100,
                        {{0, 100}})};
  }
  if (name == "fig5_cocoa") {
    return {single_flow("fig5_cocoa", seed, QdiscKind::kCocoa, Cca::kCubic, 240, 100,
                        {{0, 100}})};
  }
  if (name == "table1") {
    std::vector<Scenario> cells;
    for (Cca cca : {Cca::kReno, Cca::kCubic}) {
      for (QdiscKind q : {QdiscKind::kFq, QdiscKind::kFqCodel, QdiscKind::kCocoa}) {
        cells.push_back(single_flow(
            "table1/" + std::string(endpoints::to_string(cca)) + "/" + std::string(to_string(q)),
            seed, q, cca, 240, 50, {{0, 100}}));
      }
    }
    return cells;
  }
  if (name == "bbr") {
    return {single_flow("bbr", seed, QdiscKind::kCocoa, Cca::kBbr, 60, 10, step_at_30(50, 25))};
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace cocoa::harness
