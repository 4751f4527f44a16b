// Delivery of committed leaders' causal histories, with the optional
// timestamp-driven garbage collection layer.

#pragma once

#include <optional>
#include <set>
#include <vector>

#include "bullshark/environment.hpp"
#include "bullshark/local_dag.hpp"

namespace bullshark {

struct LogEntry {
    VertexRef ref;
    Block block;
    Round leader_round = 0;

    bool operator==(const LogEntry&) const = default;
};

struct GcConfig {
    SimTime delta = 10;  // the 3-delta rule uses the transport's delta
};

struct GcTransition {
    VertexRef leader;
    Round gc_round = 0;
    std::size_t cleared = 0;

    bool operator==(const GcTransition&) const = default;
};

/// Lower median: element at 1-indexed position ceil(k/2) of the sorted values.
SimTime median(std::vector<SimTime> values);

/// A vertex may enter the DAG only above the garbage-collection round.
inline bool admission_gate(const LocalDag& dag, const Vertex& v) { return v.round > dag.gc_round(); }

class Orderer {
public:
    Orderer(PartyId self, LocalDag& dag, PartyEnvironment& env, std::optional<GcConfig> gc = std::nullopt);

    /// Outputs a_deliver for every not-yet-delivered vertex the leader pulls
    /// in, in canonical order.
    void order_leader(const VertexPtr& leader);

    const std::vector<LogEntry>& log() const { return log_; }
    bool delivered(const VertexRef& ref) const { return delivered_.contains(ref); }
    bool gc_enabled() const { return gc_.has_value(); }
    const std::vector<GcTransition>& gc_transitions() const { return gc_transitions_; }

private:
    std::vector<VertexPtr> collect_unbounded(const VertexPtr& leader) const;
    std::vector<VertexPtr> collect_with_gc(const VertexPtr& leader);
    void deliver(std::vector<VertexPtr> batch, const VertexPtr& leader);

    PartyId self_;
    LocalDag& dag_;
    PartyEnvironment& env_;
    std::optional<GcConfig> gc_;
    std::set<VertexRef> delivered_;
    std::vector<LogEntry> log_;
    std::vector<GcTransition> gc_transitions_;
    Round pruned_floor_ = 0;
};

}  // namespace bullshark
