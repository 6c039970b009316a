#include "cocoa/endpoints/bbr.hpp"

namespace cocoa::endpoints {

void MaxBwFilter::update(std::int64_t round, double bits_per_second) {
  while (!samples_.empty() && samples_.back().second <= bits_per_second) samples_.pop_back();
  samples_.emplace_back(round, bits_per_second);
  while (samples_.front().first <= round - window_) samples_.pop_front();
}

std::array<double, 8> bbr_draw_cycle(sim::Rng& rng) {
  // Rotation r starts the cycle at pattern[r]; r = 1 would start with 3/4.
  std::uint64_t r = rng.below(kBbrGainPattern.size() - 1);
  if (r >= 1) ++r;
  std::array<double, 8> cycle{};
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    cycle[i] = kBbrGainPattern[(i + r) % kBbrGainPattern.size()];
  }
  return cycle;
}

void bbr_enter_probe_bw(BbrState& st, SimTime now, sim::Rng& rng) {
  st.mode = BbrMode::kProbeBw;
  st.cwnd_gain = kBbrCwndGain;
  st.cycle = bbr_draw_cycle(rng);
  st.cycle_index = 0;
  st.phase_start = now;
  st.pacing_gain = st.cycle[0];
  st.pacing_rate = st.pacing_gain * st.btl_bw;
}

void bbr_advance_phase(BbrState& st, SimTime now, sim::Rng& rng) {
  st.cycle_index = (st.cycle_index + 1) % st.cycle.size();
  if (st.cycle_index == 0) st.cycle = bbr_draw_cycle(rng);
  st.phase_start = now;
  st.pacing_gain = st.cycle[st.cycle_index];
  st.pacing_rate = st.pacing_gain * st.btl_bw;
}

}  // namespace cocoa::endpoints
