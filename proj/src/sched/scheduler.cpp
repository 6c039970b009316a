#include "cocoa/sched/scheduler.hpp"

#include <string>

namespace cocoa::sched {

std::string_view to_string(DropCause cause) {
  switch (cause) {
    case DropCause::kTail:
      return "tail";
    case DropCause::kCodel:
      return "codel";
    case DropCause::kCocoaShrink:
      return "cocoa-shrink";
  }
  return "unknown";
}

std::string format_trace_kind(const TraceEvent& ev) {
  switch (ev.kind) {
    case TraceKind::kAccept:
      return "accept";
    case TraceKind::kDrop:
      return "drop";
    case TraceKind::kEnlarge:
      return "enlarge(+" + std::to_string(ev.delta) + ")";
    case TraceKind::kShrink:
      return "shrink(-" + std::to_string(ev.delta) + ")";
    case TraceKind::kGiStart:
      return "gi_start";
  }
  return "unknown";
}

}  // namespace cocoa::sched
