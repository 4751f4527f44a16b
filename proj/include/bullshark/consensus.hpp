// Shared machinery of the two commit protocols: leader stack, committed
// round, and the committed-leader record.

#pragma once

#include <string_view>
#include <vector>

#include "bullshark/environment.hpp"
#include "bullshark/local_dag.hpp"
#include "bullshark/ordering.hpp"

namespace bullshark {

enum class LeaderKind { steady_first, steady_second, fallback };

std::string_view to_string(LeaderKind k);

struct CommittedLeader {
    VertexRef ref;
    Wave wave = 0;
    LeaderKind kind = LeaderKind::steady_first;
    bool direct = false;
    std::size_t votes = 0;
    SimTime time = 0;
};

class ConsensusProtocol {
public:
    virtual ~ConsensusProtocol() = default;

    /// Invoked for every vertex admitted to the local DAG.
    virtual void try_ordering(const VertexPtr& v) = 0;
    virtual bool is_steady_voter(PartyId p, Wave w) const = 0;
    virtual std::string_view name() const = 0;

    /// Leaders in the order their histories were delivered.
    virtual const std::vector<CommittedLeader>& committed_leaders() const = 0;
    virtual Round committed_round() const = 0;
};

class ConsensusBase : public ConsensusProtocol {
public:
    const std::vector<CommittedLeader>& committed_leaders() const override { return committed_; }
    Round committed_round() const override { return committed_round_; }

protected:
    ConsensusBase(PartyId self, LocalDag& dag, Orderer& orderer, PartyEnvironment& env)
        : self_(self), dag_(dag), orderer_(orderer), env_(env) {}

    std::vector<VertexPtr> resolve(const std::vector<VertexRef>& refs) const;
    void push_leader(const VertexPtr& v, LeaderKind kind, bool direct, std::size_t votes);
    /// Marks every round up to the directly committed leader's as decided,
    /// then pops and orders the stack.
    void finish_commit(const VertexPtr& direct_leader);
    void trace(TraceKind kind, const VertexPtr& leader, Round round, std::string note);

    PartyId self_;
    LocalDag& dag_;
    Orderer& orderer_;
    PartyEnvironment& env_;
    Round committed_round_ = 0;

private:
    std::vector<CommittedLeader> stack_;
    std::vector<VertexPtr> stack_vertices_;
    std::vector<CommittedLeader> committed_;
};

}  // namespace bullshark
