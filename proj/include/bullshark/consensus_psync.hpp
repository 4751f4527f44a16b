// Eventually synchronous Bullshark: steady-state leaders only, f+1 votes to
// commit directly, and a backward walk that follows strong paths.

#pragma once

#include "bullshark/consensus.hpp"

namespace bullshark {

class PsyncConsensus final : public ConsensusBase {
public:
    PsyncConsensus(PartyId self, LocalDag& dag, Orderer& orderer, PartyEnvironment& env);

    void try_ordering(const VertexPtr& v) override;
    /// No vote types: every party votes for the steady-state leaders.
    bool is_steady_voter(PartyId, Wave) const override { return true; }
    std::string_view name() const override { return "psync"; }

    bool try_commit(const std::vector<VertexPtr>& votes, const VertexPtr& leader);
    void commit_leader(const VertexPtr& leader, std::size_t votes);

private:
    std::size_t threshold_;
};

}  // namespace bullshark
