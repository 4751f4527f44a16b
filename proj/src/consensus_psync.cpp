#include "bullshark/consensus_psync.hpp"

#include <sstream>

namespace bullshark {

PsyncConsensus::PsyncConsensus(PartyId self, LocalDag& dag, Orderer& orderer, PartyEnvironment& env)
    : ConsensusBase(self, dag, orderer, env), threshold_(dag.committee().validity_threshold()) {}

void PsyncConsensus::try_ordering(const VertexPtr& v) {
    if (v->round == 0) return;
    const Wave w = wave_of(v->round);
    if (v->round % 4 == 1) {
        if (w > 1) try_commit(resolve(v->strong_edges), get_second_steady_vertex_leader(dag_, w - 1));
    } else if (v->round % 4 == 3) {
        try_commit(resolve(v->strong_edges), get_first_steady_vertex_leader(dag_, w));
    }
}

bool PsyncConsensus::try_commit(const std::vector<VertexPtr>& votes, const VertexPtr& leader) {
    if (!leader) return false;
    std::size_t n = 0;
    for (const auto& u : votes) {
        if (dag_.strong_path(*u, *leader)) ++n;
    }
    if (n < threshold_) return false;
    commit_leader(leader, n);
    return true;
}

void PsyncConsensus::commit_leader(const VertexPtr& leader, std::size_t votes) {
    if (leader->round <= committed_round_) return;

    const auto kind_of = [](Round r) { return r % 4 == 1 ? LeaderKind::steady_first : LeaderKind::steady_second; };
    {
        std::ostringstream note;
        note << "protocol=psync kind=" << to_string(kind_of(leader->round)) << " wave=" << wave_of(leader->round)
             << " votes=" << votes;
        trace(TraceKind::commit, leader, leader->round, note.str());
    }
    push_leader(leader, kind_of(leader->round), true, votes);

    VertexPtr anchor = leader;
    for (Round r = leader->round >= 2 ? leader->round - 2 : 0; r > committed_round_ && r >= 1; r -= 2) {
        const Wave w = wave_of(r);
        const auto steady = r % 4 == 1 ? get_first_steady_vertex_leader(dag_, w)
                                       : get_second_steady_vertex_leader(dag_, w);
        const std::string note = "protocol=psync wave=" + std::to_string(w);
        if (steady && dag_.strong_path(*anchor, *steady)) {
            push_leader(steady, kind_of(r), false, 0);
            trace(TraceKind::indirect_commit, steady, r, note + " kind=" + std::string(to_string(kind_of(r))));
            anchor = steady;
        } else {
            trace(TraceKind::skip, nullptr, r, note);
        }
        if (r < 2) break;
    }
    finish_commit(leader);
}

}  // namespace bullshark
