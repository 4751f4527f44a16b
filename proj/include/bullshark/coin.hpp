// Global perfect coin: per-wave leader election shared by all parties.

#pragma once

#include <cstdint>
#include <map>
#include <set>

#include "bullshark/types.hpp"

namespace bullshark {

class LeaderElection {
public:
    virtual ~LeaderElection() = default;
    virtual PartyId choose_leader(Wave w) const = 0;
};

/// Thrown when the adversarial scheduler asks for a wave's leader before
/// f+1 honest parties have produced their last-round vertex of that wave.
class CoinGateViolation : public ProtocolError {
public:
    using ProtocolError::ProtocolError;
};

/// Keyed PRF over (seed, wave) reduced mod n, plus the reveal gate that
/// models unpredictability against the scheduler.
class SeededCoin final : public LeaderElection {
public:
    SeededCoin(std::uint64_t seed, Committee committee) : seed_(seed), committee_(committee) {}

    PartyId choose_leader(Wave w) const override;

    /// Records that honest party p produced its round-4w vertex.
    void note_round_end_vertex(Wave w, PartyId p) { revealed_by_[w].insert(p); }
    bool gate_open(Wave w) const;

    /// Scheduler-side query; throws CoinGateViolation while the gate is shut.
    PartyId adversary_query(Wave w) const;

private:
    std::uint64_t seed_;
    Committee committee_;
    std::map<Wave, std::set<PartyId>> revealed_by_;
};

/// Fixed wave -> leader table for scripted replays.
class ScriptedCoin final : public LeaderElection {
public:
    explicit ScriptedCoin(std::map<Wave, PartyId> table) : table_(std::move(table)) {}
    PartyId choose_leader(Wave w) const override;

private:
    std::map<Wave, PartyId> table_;
};

}  // namespace bullshark
