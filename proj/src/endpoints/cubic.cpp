#include "cocoa/endpoints/cubic.hpp"

#include <algorithm>
#include <cmath>

namespace cocoa::endpoints {

void cubic_begin_epoch(CubicState& st, std::int64_t cwnd_before, std::int64_t mss, SimTime now) {
  st.w_max = cwnd_before;
  const double w_max_segments = static_cast<double>(cwnd_before) / static_cast<double>(mss);
  st.k = std::cbrt(w_max_segments * (1.0 - CubicState::kBeta) / CubicState::kC);
  st.epoch_start = now;
  st.ack_count = 0;
}

std::int64_t cubic_window(const CubicState& st, std::int64_t mss, SimTime now) {
  const double t = (now - st.epoch_start).seconds() - st.k;
  const double segments =
      static_cast<double>(st.w_max) / static_cast<double>(mss) + CubicState::kC * t * t * t;
  const double bytes = segments * static_cast<double>(mss);
  return std::max<std::int64_t>(std::llround(bytes), mss);
}

}  // namespace cocoa::endpoints
