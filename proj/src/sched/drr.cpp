#include "cocoa/sched/drr.hpp"

namespace cocoa::sched {

bool DrrState::active(FlowId flow) const {
  auto it = slots_.find(flow);
  return it != slots_.end() && it->second.in_ring;
}

std::int64_t DrrState::deficit(FlowId flow) const {
  auto it = slots_.find(flow);
  return it == slots_.end() ? 0 : it->second.deficit;
}

void DrrState::activate(FlowId flow) {
  Slot& slot = slots_[flow];
  if (slot.in_ring) return;
  slot.in_ring = true;
  slot.deficit = quantum_;
  ring_.push_back(flow);
}

}  // namespace cocoa::sched
