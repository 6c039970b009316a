#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "cocoa/sched/drr.hpp"
#include "cocoa/sched/scheduler.hpp"

namespace cocoa::sched {

/// Flow-isolating scheduler: one FlowQueue per flow id, served by DRR.
///
/// FlowQueue requirements:
///   EnqueueOutcome enqueue(Packet, SimTime, const FlowHooks&);
///   std::optional<Packet> dequeue(SimTime, const FlowHooks&);
///   std::size_t size() const;
template <class FlowQueue>
class FairQueue : public Scheduler {
 public:
  using Factory = std::function<FlowQueue(FlowId)>;

  FairQueue(std::string name, Factory factory, std::int32_t quantum = net::kMtu)
      : name_(std::move(name)), factory_(std::move(factory)), drr_(quantum) {}

  EnqueueOutcome enqueue(Packet pkt, SimTime now) override {
    const FlowId flow = pkt.flow;
    FlowQueue& q = queue(flow);
    pkt.enqueue_time = now;
    const std::size_t before = q.size();
    EnqueueOutcome out = q.enqueue(std::move(pkt), now, hooks());
    backlog_ = backlog_ + q.size() - before;
    if (q.size() > 0 && !drr_.active(flow)) drr_.activate(flow);
    return out;
  }

  std::optional<Packet> dequeue(SimTime now) override {
    Adapter adapter{*this};
    auto next = drr_.dequeue(adapter, now);
    if (!next) return std::nullopt;
    return std::move(next->second);
  }

  std::size_t occupancy(FlowId flow) const override {
    auto it = flows_.find(flow);
    return it == flows_.end() ? 0 : it->second.size();
  }

  std::size_t backlog() const override { return backlog_; }
  std::string_view name() const override { return name_; }

  const DrrState& drr() const { return drr_; }

  /// Per-flow state, created on first use.
  FlowQueue& queue(FlowId flow) {
    auto it = flows_.find(flow);
    if (it == flows_.end()) it = flows_.emplace(flow, factory_(flow)).first;
    return it->second;
  }
  const FlowQueue* find(FlowId flow) const {
    auto it = flows_.find(flow);
    return it == flows_.end() ? nullptr : &it->second;
  }

 private:
  struct Adapter {
    FairQueue& fq;
    std::optional<Packet> pop(FlowId flow, SimTime now) {
      FlowQueue& q = fq.queue(flow);
      const std::size_t before = q.size();
      auto pkt = q.dequeue(now, fq.hooks());
      fq.backlog_ -= before - q.size();
      return pkt;
    }
    bool empty(FlowId flow) const { return fq.occupancy(flow) == 0; }
  };

  std::string name_;
  Factory factory_;
  DrrState drr_;
  std::map<FlowId, FlowQueue> flows_;
  std::size_t backlog_ = 0;
};

}  // namespace cocoa::sched
