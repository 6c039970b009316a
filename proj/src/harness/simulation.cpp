#include "cocoa/harness/simulation.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <memory>
#include <optional>

#include "cocoa/endpoints/receiver.hpp"
#include "cocoa/endpoints/sender.hpp"
#include "cocoa/net/link.hpp"
#include "cocoa/sched/cocoa.hpp"
#include "cocoa/sched/fq.hpp"
#include "cocoa/sched/fq_codel.hpp"

namespace cocoa::harness {
namespace {

using net::Packet;
using sim::EventKind;
using sim::SimTime;

std::unique_ptr<sched::Scheduler> make_scheduler(const Scenario& s) {
  switch (s.qdisc) {
    case QdiscKind::kFq:
      return sched::make_fq(static_cast<std::size_t>(s.fq_limit));
    case QdiscKind::kFqCodel:
      return sched::make_fq_codel({}, static_cast<std::size_t>(s.fq_limit));
    case QdiscKind::kCocoa:
      return sched::make_cocoa(s.cocoa);
  }
  throw std::logic_error("unhandled qdisc");
}

struct FlowRuntime {
  endpoints::Sender sender;
  endpoints::Receiver receiver;
  std::optional<SimTime> armed_at;  // earliest pending timer event
  metrics::DropCounts drops;
  double rtt_sum_ms = 0;
  std::size_t rtt_count = 0;
};

void count_drop(metrics::DropCounts& d, sched::DropCause cause) {
  switch (cause) {
    case sched::DropCause::kTail:
      ++d.tail;
      break;
    case sched::DropCause::kCodel:
      ++d.codel;
      break;
    case sched::DropCause::kCocoaShrink:
      ++d.cocoa_shrink;
      break;
  }
}

class Simulation {
 public:
  Simulation(const Scenario& s, const RunOptions& options)
      : s_(s),
        options_(options),
        scheduler_(make_scheduler(s)),
        link_(engine_, *scheduler_, s.rate_schedule(), s.one_way_delay()),
        result_(s.duration()) {
    for (std::size_t i = 0; i < s.flows.size(); ++i) {
      const auto id = static_cast<net::FlowId>(i);
      flows_.push_back(FlowRuntime{
          endpoints::Sender({id, s.flows[i].cca, s.seed * 1000003 + i, 10}),
          endpoints::Receiver(id), std::nullopt, {}, 0, 0});
      result_.series.throughput.add_flow(id);
    }
    scheduler_->set_head_drop_callback(
        [this](const Packet& p, sched::DropCause cause, SimTime) { on_drop(p, cause); });
    if (s.qdisc == QdiscKind::kCocoa || options.trace != nullptr) {
      scheduler_->set_trace_sink([this](const sched::TraceEvent& ev) { on_trace(ev); });
    }
    if (options.trace != nullptr) {
      fmt::print(*options.trace, "time_ns,flow,event,buffer_size,occupancy\n");
    }
    engine_.set_log(options.event_log);
  }

  RunResult run() {
    for (std::size_t i = 0; i < s_.flows.size(); ++i) {
      engine_.schedule(SimTime::from_seconds(s_.flows[i].start_s), EventKind::kFlowStart,
                       static_cast<net::FlowId>(i), Packet{});
    }
    for (const auto& step : s_.rates) {
      if (step.start_s > 0) {
        engine_.schedule(SimTime::from_seconds(step.start_s), EventKind::kRateChange, 0, Packet{});
      }
    }
    engine_.run_until(s_.duration(), [this](sim::Event<Packet>& ev) { dispatch(ev); });
    finish();
    return std::move(result_);
  }

 private:
  void dispatch(sim::Event<Packet>& ev) {
    const SimTime now = ev.fire_time;
    switch (ev.kind) {
      case EventKind::kFlowStart: {
        auto& f = flows_[ev.flow];
        if (s_.qdisc == QdiscKind::kCocoa) {
          result_.series.buffer.push_back({now, ev.flow, s_.cocoa.initial_buffer, 0});
        }
        send(f.sender.start(now), now);
        arm(ev.flow);
        break;
      }
      case EventKind::kPacketArrival: {
        --ledger().arriving;
        const bool was_busy = link_.busy();
        sched::EnqueueOutcome out = link_.arrival(std::move(ev.payload), now);
        if (out.accepted) ++ledger().queued;
        for (const auto& d : out.dropped) {
          // Evicted packets were counted as queued; the incoming one was not.
          if (d.cause == sched::DropCause::kCocoaShrink) --ledger().queued;
          record_drop(d.packet, d.cause);
        }
        if (!was_busy && link_.busy()) started_service();
        break;
      }
      case EventKind::kTransmitComplete: {
        --ledger().in_service;
        ++ledger().propagating;
        link_.transmit_complete(std::move(ev.payload), now);
        if (link_.busy()) started_service();
        break;
      }
      case EventKind::kDelivery:
        if (ev.payload.is_ack) {
          on_ack(ev.payload, now);
        } else {
          on_data(ev.payload, now);
        }
        break;
      case EventKind::kTimer: {
        auto& f = flows_[ev.flow];
        if (f.armed_at != now) break;  // superseded by an earlier timer
        f.armed_at.reset();
        send(f.sender.on_timer(now), now);
        arm(ev.flow);
        break;
      }
      case EventKind::kRateChange:
        // The link reads the schedule when each serialization starts.
        break;
    }
  }

  void started_service() {
    --ledger().queued;
    ++ledger().in_service;
  }

  void on_data(const Packet& pkt, SimTime now) {
    --ledger().propagating;
    ++ledger().delivered;
    auto& f = flows_[pkt.flow];
    result_.series.throughput.record(pkt.flow, now, pkt.payload_bytes());
    net::ack_return(engine_, f.receiver.on_data(pkt, now), now, link_.one_way_delay());
  }

  void on_ack(const Packet& ack, SimTime now) {
    auto& f = flows_[ack.flow];
    if (ack.ack_seq > f.sender.state().highest_acked) {
      const double rtt_ms = (now - ack.ts_echo).ms();
      result_.series.rtt.push_back({now, ack.flow, rtt_ms});
      f.rtt_sum_ms += rtt_ms;
      ++f.rtt_count;
    }
    send(f.sender.on_ack(ack, now), now);
    arm(ack.flow);
  }

  void send(std::vector<Packet> pkts, SimTime now) {
    for (auto& p : pkts) {
      ++ledger().sent;
      ++ledger().arriving;
      const net::FlowId flow = p.flow;
      engine_.schedule(now, EventKind::kPacketArrival, flow, std::move(p));
    }
  }

  void arm(net::FlowId flow) {
    auto& f = flows_[flow];
    const auto wake = f.sender.next_wakeup();
    if (!wake) return;
    if (f.armed_at && *f.armed_at <= *wake) return;
    const SimTime at = sim::max(*wake, engine_.now());
    f.armed_at = at;
    engine_.schedule(at, EventKind::kTimer, flow, Packet{});
  }

  void on_drop(const Packet& p, sched::DropCause cause) {
    // Head drops happen inside dequeue, on packets counted as queued.
    --ledger().queued;
    record_drop(p, cause);
  }

  void record_drop(const Packet& p, sched::DropCause cause) {
    ++ledger().dropped;
    count_drop(flows_[p.flow].drops, cause);
    count_drop(result_.summary.drops, cause);
  }

  void on_trace(const sched::TraceEvent& ev) {
    switch (ev.kind) {
      case sched::TraceKind::kEnlarge:
        ++result_.enlargements;
        result_.series.buffer.push_back({ev.time, ev.flow, ev.buffer_size, ev.occupancy});
        break;
      case sched::TraceKind::kShrink:
        result_.shrinks.push_back(ev);
        result_.series.buffer.push_back({ev.time, ev.flow, ev.buffer_size, ev.occupancy});
        break;
      case sched::TraceKind::kGiStart:
        result_.series.buffer.push_back({ev.time, ev.flow, ev.buffer_size, ev.occupancy});
        break;
      case sched::TraceKind::kAccept:
      case sched::TraceKind::kDrop:
        break;
    }
    if (options_.trace != nullptr) {
      fmt::print(*options_.trace, "{},{},{},{},{}\n", ev.time.ns(), ev.flow,
                 sched::format_trace_kind(ev), ev.buffer_size, ev.occupancy);
    }
  }

  void finish() {
    auto& sum = result_.summary;
    const auto& tp = result_.series.throughput;
    sum.total_delivered = tp.total();
    sum.utilization_pct = metrics::utilization(sum.total_delivered, link_.rates(), s_.duration());
    double rtt_sum = 0;
    std::size_t rtt_count = 0;
    for (std::size_t i = 0; i < flows_.size(); ++i) {
      const auto& f = flows_[i];
      const auto id = static_cast<net::FlowId>(i);
      metrics::FlowSummary fs;
      fs.flow = id;
      fs.cca = std::string(endpoints::to_string(s_.flows[i].cca));
      fs.delivered_bytes = tp.total(id);
      fs.rtt_samples = f.rtt_count;
      fs.mean_rtt_ms = f.rtt_count > 0 ? f.rtt_sum_ms / static_cast<double>(f.rtt_count) : 0;
      fs.retransmissions = f.sender.retransmissions();
      fs.timeouts = f.sender.timeouts();
      fs.drops = f.drops;
      sum.flows.push_back(fs);
      rtt_sum += f.rtt_sum_ms;
      rtt_count += f.rtt_count;
    }
    sum.mean_rtt_ms = rtt_count > 0 ? rtt_sum / static_cast<double>(rtt_count) : 0;
    result_.events = engine_.dispatched();
  }

  PacketLedger& ledger() { return result_.ledger; }

  const Scenario& s_;
  RunOptions options_;
  net::NetEngine engine_;
  std::unique_ptr<sched::Scheduler> scheduler_;
  net::BottleneckLink link_;
  std::vector<FlowRuntime> flows_;
  RunResult result_;
};

}  // namespace

RunResult simulate(const Scenario& s, const RunOptions& options) {
  if (auto errors = s.validate(); !errors.empty()) throw ScenarioError(std::move(errors));
  Simulation sim(s, options);
  return sim.run();
}

metrics::RunSummary run_scenario(const Scenario& s, const std::filesystem::path& out_dir,
                                 bool log_events, bool trace) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw metrics::ExportError("cannot create " + out_dir.string() + ": " + ec.message());

  std::ofstream events;
  std::ofstream trace_file;
  RunOptions options;
  auto open = [&](std::ofstream& f, const char* name) {
    const auto path = out_dir / name;
    f.open(path);
    if (!f) throw metrics::ExportError("cannot write " + path.string());
    return &f;
  };
  if (log_events) options.event_log = open(events, "events.csv");
  if (trace) options.trace = open(trace_file, "trace.csv");

  RunResult r = simulate(s, options);
  for (std::ofstream* f : {&events, &trace_file}) {
    if (f->is_open()) {
      f->close();
      if (!*f) throw metrics::ExportError("write failed in " + out_dir.string());
    }
  }

  std::vector<std::pair<std::string, std::string>> extra = {
      {"scenario", s.name},
      {"qdisc", std::string(to_string(s.qdisc))},
      {"seed", std::to_string(s.seed)},
      {"duration_s", fmt::format("{}", s.duration_s)},
      {"events", std::to_string(r.events)},
  };
  if (s.qdisc == QdiscKind::kCocoa) {
    extra.emplace_back("cocoa_enlargements", std::to_string(r.enlargements));
    extra.emplace_back("cocoa_shrinks", std::to_string(r.shrinks.size()));
  }
  metrics::export_csv(r.series, r.summary, out_dir, extra);
  return r.summary;
}

}  // namespace cocoa::harness
