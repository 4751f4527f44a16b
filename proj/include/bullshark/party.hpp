// One party's protocol stack: DAG, ordering layer, commit rule, and the
// construction state machine that drives them.

#pragma once

#include <memory>

#include "bullshark/coin.hpp"
#include "bullshark/consensus_fallback.hpp"
#include "bullshark/consensus_psync.hpp"
#include "bullshark/dag_core.hpp"

namespace bullshark {

enum class Protocol { fallback, psync };

std::string_view to_string(Protocol p);
std::optional<Protocol> protocol_from_string(std::string_view s);

class Party {
public:
    Party(PartyId self, const Committee& committee, Protocol protocol, const LeaderElection& coin,
          PartyEnvironment& env, DagCoreConfig core_config, std::optional<GcConfig> gc);

    Party(const Party&) = delete;
    Party& operator=(const Party&) = delete;

    PartyId id() const { return id_; }
    LocalDag& dag() { return dag_; }
    const LocalDag& dag() const { return dag_; }
    const Orderer& orderer() const { return orderer_; }
    ConsensusProtocol& consensus() { return *consensus_; }
    const ConsensusProtocol& consensus() const { return *consensus_; }
    DagCore& core() { return core_; }
    const DagCore& core() const { return core_; }

    /// Vote-type ledger, or nullptr for the psync protocol.
    const VoteTypeLedger* ledger() const;

private:
    PartyId id_;
    LocalDag dag_;
    Orderer orderer_;
    std::unique_ptr<ConsensusProtocol> consensus_;
    DagCore core_;
};

}  // namespace bullshark
