// Per-party DAG construction: admission, buffering, round advancement with
// timeouts, round jumping, and vertex broadcast.

#pragma once

#include <deque>
#include <limits>
#include <map>

#include "bullshark/consensus.hpp"
#include "bullshark/environment.hpp"
#include "bullshark/local_dag.hpp"

namespace bullshark {

struct DagCoreConfig {
    SimTime timeout_ticks = 50;
    /// The party never enters a round above this one.
    Round max_round = std::numeric_limits<Round>::max();
    /// Observer mode: admits and orders vertices but never broadcasts or
    /// starts timers.
    bool passive = false;
};

class DagCore {
public:
    DagCore(PartyId self, LocalDag& dag, ConsensusProtocol& consensus, PartyEnvironment& env, DagCoreConfig config);

    /// Enters round 1.
    void start();

    /// Queues a block payload for a future vertex.
    void a_bcast(std::string payload);

    void on_r_deliver(const VertexPtr& v, Round r, PartyId p);
    void on_timeout(Round round, std::uint64_t epoch);

    /// Validity check on a delivered vertex; returns the reason it is
    /// malformed, or an empty string.
    std::string malformed_reason(const Vertex& v, Round r, PartyId p) const;

    PartyId self() const { return self_; }
    Round round() const { return round_; }
    bool waiting() const { return wait_; }
    std::size_t buffer_size() const { return buffer_.size(); }
    std::uint64_t timer_epoch() const { return epoch_; }
    const DagCoreConfig& config() const { return config_; }

private:
    bool try_add_to_dag(const VertexPtr& v);
    void retry_buffer();
    void evaluate_conditions();
    bool advancement_condition(Round r) const;
    bool leader_votes_present(Round r, const VertexPtr& leader) const;
    bool try_advance_round();
    void enter_round(Round r);
    void broadcast_vertex(Round r);
    Block next_block();
    void trace(TraceKind kind, std::optional<std::uint32_t> sender, std::optional<Round> round,
               std::string digest, std::string note);

    PartyId self_;
    LocalDag& dag_;
    ConsensusProtocol& consensus_;
    PartyEnvironment& env_;
    DagCoreConfig config_;

    Round round_ = 0;
    bool wait_ = true;
    std::uint64_t epoch_ = 0;
    std::uint64_t next_seq_ = 0;
    std::deque<Block> blocks_to_propose_;
    std::map<VertexRef, VertexPtr> buffer_;
};

}  // namespace bullshark
