#include "cocoa/harness/scenario.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace cocoa::harness {

std::string_view to_string(QdiscKind kind) {
  switch (kind) {
    case QdiscKind::kFq:
      return "fq";
    case QdiscKind::kFqCodel:
      return "fq_codel";
    case QdiscKind::kCocoa:
      return "cocoa";
  }
  return "unknown";
}

std::optional<QdiscKind> parse_qdisc(std::string_view name) {
  if (name == "fq") return QdiscKind::kFq;
  if (name == "fq_codel") return QdiscKind::kFqCodel;
  if (name == "cocoa") return QdiscKind::kCocoa;
  return std::nullopt;
}

net::RateSchedule Scenario::rate_schedule() const {
  std::vector<net::RateStep> steps;
  steps.reserve(rates.size());
  for (const auto& r : rates) steps.push_back({sim::SimTime::from_seconds(r.start_s), r.mbps * 1e6});
  return net::RateSchedule(std::move(steps));
}

std::vector<std::string> Scenario::validate() const {
  std::vector<std::string> errors;
  if (!(duration_s > 0)) errors.push_back("duration_s: must be > 0");
  if (mtu != net::kMtu) errors.push_back(fmt::format("mtu: only {} is supported", net::kMtu));
  if (mss != net::kMss) errors.push_back(fmt::format("mss: only {} is supported", net::kMss));
  if (one_way_delay_ms < 0) errors.push_back("one_way_delay_ms: must be >= 0");
  if (fq_limit < 1) errors.push_back("fq.limit: must be >= 1");
  if (!(cocoa.multiplier > 0)) errors.push_back("cocoa.multiplier: must be > 0");
  if (!(cocoa.max_increase_factor >= 1)) errors.push_back("cocoa.max_increase_factor: must be >= 1");
  if (cocoa.max_gi <= sim::SimTime{}) errors.push_back("cocoa.max_gi_s: must be > 0");
  if (cocoa.buffer_floor < 1) errors.push_back("cocoa.buffer_floor: must be >= 1");
  if (cocoa.initial_buffer < cocoa.buffer_floor) {
    errors.push_back("cocoa.initial_buffer: must be >= cocoa.buffer_floor");
  }
  if (rates.empty()) {
    errors.push_back("rate_schedule: at least one [rate] step is required");
  } else {
    if (rates.front().start_s != 0) errors.push_back("rate_schedule: first step must start at 0");
    for (std::size_t i = 0; i < rates.size(); ++i) {
      if (!(rates[i].mbps > 0)) {
        errors.push_back(fmt::format("rate_schedule: step {} rate must be > 0", i));
      }
      if (i > 0 && !(rates[i].start_s > rates[i - 1].start_s)) {
        errors.push_back(fmt::format(
            "rate_schedule: step {} starts at {} s, not after step {} at {} s", i,
            rates[i].start_s, i - 1, rates[i - 1].start_s));
      }
    }
  }
  if (flows.empty()) errors.push_back("flows: at least one [flow] is required");
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (flows[i].start_s < 0 || !(flows[i].start_s < duration_s)) {
      errors.push_back(fmt::format("flow[{}].start_s: must be in [0, duration_s)", i));
    }
  }
  return errors;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.name == b.name && a.seed == b.seed && a.duration_s == b.duration_s &&
         a.mtu == b.mtu && a.mss == b.mss && a.qdisc == b.qdisc &&
         a.cocoa.multiplier == b.cocoa.multiplier &&
         a.cocoa.max_increase_factor == b.cocoa.max_increase_factor &&
         a.cocoa.max_gi == b.cocoa.max_gi && a.cocoa.initial_buffer == b.cocoa.initial_buffer &&
         a.cocoa.buffer_floor == b.cocoa.buffer_floor && a.fq_limit == b.fq_limit &&
         a.one_way_delay_ms == b.one_way_delay_ms && a.rates == b.rates && a.flows == b.flows;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

enum class Section { kTop, kRate, kFlow };

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid scenario:";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  s.rates.clear();
  std::vector<std::string> errors;
  Section section = Section::kTop;
  std::size_t line_no = 0;

  auto where = [&](std::string_view key) -> std::string {
    switch (section) {
      case Section::kRate:
        return fmt::format("rate[{}].{}", s.rates.size() - 1, key);
      case Section::kFlow:
        return fmt::format("flow[{}].{}", s.flows.size() - 1, key);
      case Section::kTop:
        break;
    }
    return std::string(key);
  };

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line == "[rate]") {
      section = Section::kRate;
      s.rates.push_back({});
      continue;
    }
    if (line == "[flow]") {
      section = Section::kFlow;
      s.flows.push_back({});
      continue;
    }
    if (line.front() == '[') {
      errors.push_back(fmt::format("line {}: unknown section {}", line_no, line));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(fmt::format("line {}: expected key = value", line_no));
      continue;
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    auto number = [&](auto& field) {
      if (!parse_number(value, field)) {
        errors.push_back(fmt::format("{}: '{}' is not a number", where(key), value));
      }
    };

    if (section == Section::kRate) {
      auto& r = s.rates.back();
      if (key == "start_s") number(r.start_s);
      else if (key == "mbps") number(r.mbps);
      else errors.push_back(fmt::format("{}: unknown field", where(key)));
      continue;
    }
    if (section == Section::kFlow) {
      auto& f = s.flows.back();
      if (key == "start_s") {
        number(f.start_s);
      } else if (key == "cca") {
        if (auto cca = endpoints::parse_cca(value)) {
          f.cca = *cca;
        } else {
          errors.push_back(fmt::format("{}: unknown cca '{}' (supported: reno, cubic, bbr)",
                                       where(key), value));
        }
      } else {
        errors.push_back(fmt::format("{}: unknown field", where(key)));
      }
      continue;
    }

    if (key == "name") {
      s.name = std::string(value);
    } else if (key == "seed") {
      number(s.seed);
    } else if (key == "duration_s") {
      number(s.duration_s);
    } else if (key == "mtu") {
      number(s.mtu);
    } else if (key == "mss") {
      number(s.mss);
    } else if (key == "one_way_delay_ms") {
      number(s.one_way_delay_ms);
    } else if (key == "qdisc") {
      if (auto q = parse_qdisc(value)) {
        s.qdisc = *q;
      } else {
        errors.push_back(fmt::format("qdisc: unknown qdisc '{}' (supported: fq, fq_codel, cocoa)",
                                     value));
      }
    } else if (key == "fq.limit") {
      number(s.fq_limit);
    } else if (key == "cocoa.multiplier") {
      number(s.cocoa.multiplier);
    } else if (key == "cocoa.max_increase_factor") {
      number(s.cocoa.max_increase_factor);
    } else if (key == "cocoa.max_gi_s") {
      double v = 0;
      if (parse_number(value, v)) {
        s.cocoa.max_gi = sim::SimTime::from_seconds(v);
      } else {
        errors.push_back(fmt::format("cocoa.max_gi_s: '{}' is not a number", value));
      }
    } else if (key == "cocoa.initial_buffer") {
      number(s.cocoa.initial_buffer);
    } else if (key == "cocoa.buffer_floor") {
      number(s.cocoa.buffer_floor);
    } else {
      errors.push_back(fmt::format("{}: unknown field", key));
    }
  }

  if (errors.empty()) errors = s.validate();
  if (!errors.empty()) throw ScenarioError(std::move(errors));
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot read scenario file " + path});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string to_text(const Scenario& s) {
  std::string out;
  auto w = std::back_inserter(out);
  if (!s.name.empty()) fmt::format_to(w, "name = {}\n", s.name);
  fmt::format_to(w, "seed = {}\n", s.seed);
  fmt::format_to(w, "duration_s = {}\n", s.duration_s);
  fmt::format_to(w, "mtu = {}\nmss = {}\n", s.mtu, s.mss);
  fmt::format_to(w, "one_way_delay_ms = {}\n", s.one_way_delay_ms);
  fmt::format_to(w, "qdisc = {}\n", to_string(s.qdisc));
  fmt::format_to(w, "fq.limit = {}\n", s.fq_limit);
  fmt::format_to(w, "cocoa.multiplier = {}\n", s.cocoa.multiplier);
  fmt::format_to(w, "cocoa.max_increase_factor = {}\n", s.cocoa.max_increase_factor);
  fmt::format_to(w, "cocoa.max_gi_s = {}\n", s.cocoa.max_gi.seconds());
  fmt::format_to(w, "cocoa.initial_buffer = {}\n", s.cocoa.initial_buffer);
  fmt::format_to(w, "cocoa.buffer_floor = {}\n", s.cocoa.buffer_floor);
  for (const auto& r : s.rates) {
    fmt::format_to(w, "\n[rate]\nstart_s = {}\nmbps = {}\n", r.start_s, r.mbps);
  }
  for (const auto& f : s.flows) {
    fmt::format_to(w, "\n[flow]\ncca = {}\nstart_s = {}\n", endpoints::to_string(f.cca), f.start_s);
  }
  return out;
}

}  // namespace cocoa::harness
