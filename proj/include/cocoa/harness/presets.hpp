#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cocoa/harness/scenario.hpp"

namespace cocoa::harness {

struct PresetInfo {
  std::string name;
  std::string description;
  int default_seeds = 1;
};

const std::vector<PresetInfo>& list_presets();
bool is_preset(std::string_view name);

/// The scenarios ("cells") a preset runs for one seed. Most presets have a
/// single cell; table1 has one per CCA x qdisc. Cell names are
/// "<preset>" or "<preset>/<cca>/<qdisc>". Throws std::invalid_argument for
/// an unknown name.
std::vector<Scenario> expand_preset(std::string_view name, std::uint64_t seed);

}  // namespace cocoa::harness
