#include "bullshark/party.hpp"

namespace bullshark {

std::string_view to_string(Protocol p) { return p == Protocol::fallback ? "fallback" : "psync"; }

std::optional<Protocol> protocol_from_string(std::string_view s) {
    if (s == "fallback") return Protocol::fallback;
    if (s == "psync") return Protocol::psync;
    return std::nullopt;
}

namespace {

std::unique_ptr<ConsensusProtocol> make_consensus(PartyId self, LocalDag& dag, Protocol protocol,
                                                  const LeaderElection& coin, Orderer& orderer,
                                                  PartyEnvironment& env) {
    if (protocol == Protocol::fallback) return std::make_unique<FallbackConsensus>(self, dag, coin, orderer, env);
    return std::make_unique<PsyncConsensus>(self, dag, orderer, env);
}

}  // namespace

Party::Party(PartyId self, const Committee& committee, Protocol protocol, const LeaderElection& coin,
             PartyEnvironment& env, DagCoreConfig core_config, std::optional<GcConfig> gc)
    : id_(self),
      dag_(committee),
      orderer_(self, dag_, env, gc),
      consensus_(make_consensus(self, dag_, protocol, coin, orderer_, env)),
      core_(self, dag_, *consensus_, env, core_config) {}

const VoteTypeLedger* Party::ledger() const {
    if (auto* fb = dynamic_cast<const FallbackConsensus*>(consensus_.get())) return &fb->ledger();
    return nullptr;
}

}  // namespace bullshark
