// Bullshark with fallback leaders: per-wave vote types, direct commits of
// steady-state and fallback leaders, and the backward walk that decides
// which skipped leaders other parties might have committed.

#pragma once

#include <map>
#include <set>

#include "bullshark/coin.hpp"
#include "bullshark/consensus.hpp"

namespace bullshark {

/// Partition of parties into steady-state and fallback voters, per wave.
/// Wave 1 starts with every party a steady-state voter.
class VoteTypeLedger {
public:
    explicit VoteTypeLedger(const Committee& committee);

    bool is_steady(PartyId p, Wave w) const;
    bool is_fallback(PartyId p, Wave w) const;
    bool is_classified(PartyId p, Wave w) const { return is_steady(p, w) || is_fallback(p, w); }
    /// Returns false if p already has a type in w (a type is set at most once).
    bool classify(PartyId p, Wave w, bool steady);

    const std::set<PartyId>& steady_voters(Wave w) const;
    const std::set<PartyId>& fallback_voters(Wave w) const;
    std::vector<Wave> waves() const;

private:
    std::map<Wave, std::set<PartyId>> steady_;
    std::map<Wave, std::set<PartyId>> fallback_;
};

class FallbackConsensus final : public ConsensusBase {
public:
    FallbackConsensus(PartyId self, LocalDag& dag, const LeaderElection& coin, Orderer& orderer,
                      PartyEnvironment& env);

    void try_ordering(const VertexPtr& v) override;
    bool is_steady_voter(PartyId p, Wave w) const override { return ledger_.is_steady(p, w); }
    std::string_view name() const override { return "fallback"; }

    const VoteTypeLedger& ledger() const { return ledger_; }

    void determine_party_vote_type(PartyId p, const std::vector<VertexPtr>& votes, Wave w);
    bool try_steady_commit(const std::vector<VertexPtr>& votes, const VertexPtr& leader, Wave w);
    bool try_fallback_commit(const std::vector<VertexPtr>& votes, const VertexPtr& leader, Wave w);
    void commit_leader(const VertexPtr& leader, LeaderKind kind, std::size_t votes);

private:
    std::size_t count_votes(const std::vector<VertexPtr>& votes, const VertexPtr& leader,
                            const std::set<PartyId>& eligible) const;

    const Committee& committee_;
    const LeaderElection& coin_;
    VoteTypeLedger ledger_;
};

}  // namespace bullshark
