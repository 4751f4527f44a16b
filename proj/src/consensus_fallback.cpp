#include "bullshark/consensus_fallback.hpp"

#include <sstream>

namespace bullshark {

namespace {
const std::set<PartyId> kNobody;
}

VoteTypeLedger::VoteTypeLedger(const Committee& committee) {
    for (auto p : committee.parties()) steady_[1].insert(p);
    fallback_[1];
}

bool VoteTypeLedger::is_steady(PartyId p, Wave w) const { return steady_voters(w).contains(p); }

bool VoteTypeLedger::is_fallback(PartyId p, Wave w) const { return fallback_voters(w).contains(p); }

bool VoteTypeLedger::classify(PartyId p, Wave w, bool steady) {
    if (is_classified(p, w)) return false;
    (steady ? steady_ : fallback_)[w].insert(p);
    return true;
}

const std::set<PartyId>& VoteTypeLedger::steady_voters(Wave w) const {
    auto it = steady_.find(w);
    return it == steady_.end() ? kNobody : it->second;
}

const std::set<PartyId>& VoteTypeLedger::fallback_voters(Wave w) const {
    auto it = fallback_.find(w);
    return it == fallback_.end() ? kNobody : it->second;
}

std::vector<Wave> VoteTypeLedger::waves() const {
    std::set<Wave> all;
    for (const auto& [w, _] : steady_) all.insert(w);
    for (const auto& [w, _] : fallback_) all.insert(w);
    return {all.begin(), all.end()};
}

FallbackConsensus::FallbackConsensus(PartyId self, LocalDag& dag, const LeaderElection& coin, Orderer& orderer,
                                     PartyEnvironment& env)
    : ConsensusBase(self, dag, orderer, env), committee_(dag.committee()), coin_(coin), ledger_(dag.committee()) {}

void FallbackConsensus::try_ordering(const VertexPtr& v) {
    if (v->round == 0) return;
    const Wave w = wave_of(v->round);
    const auto votes = resolve(v->strong_edges);
    if (v->round % 4 == 1) {
        if (w > 1) determine_party_vote_type(v->source, votes, w);
    } else if (v->round % 4 == 3) {
        try_steady_commit(votes, get_first_steady_vertex_leader(dag_, w), w);
    }
}

void FallbackConsensus::determine_party_vote_type(PartyId p, const std::vector<VertexPtr>& votes, Wave w) {
    if (ledger_.is_classified(p, w)) return;
    const auto second = get_second_steady_vertex_leader(dag_, w - 1);
    const auto fallback = get_fallback_vertex_leader(dag_, coin_, w - 1);
    const bool steady = try_steady_commit(votes, second, w - 1) || try_fallback_commit(votes, fallback, w - 1);
    ledger_.classify(p, w, steady);

    TraceRecord r;
    r.time = env_.now();
    r.kind = TraceKind::vote_type;
    r.sender = p.value;
    r.recipient = self_.value;
    r.round = first_round_of(w);
    r.note = "wave=" + std::to_string(w) + (steady ? " type=steady" : " type=fallback");
    env_.record(std::move(r));
}

std::size_t FallbackConsensus::count_votes(const std::vector<VertexPtr>& votes, const VertexPtr& leader,
                                           const std::set<PartyId>& eligible) const {
    std::size_t n = 0;
    for (const auto& u : votes) {
        if (eligible.contains(u->source) && dag_.strong_path(*u, *leader)) ++n;
    }
    return n;
}

bool FallbackConsensus::try_steady_commit(const std::vector<VertexPtr>& votes, const VertexPtr& leader, Wave w) {
    if (!leader) return false;
    const auto n = count_votes(votes, leader, ledger_.steady_voters(w));
    if (n < committee_.quorum()) return false;
    const auto kind = leader->round % 4 == 1 ? LeaderKind::steady_first : LeaderKind::steady_second;
    commit_leader(leader, kind, n);
    return true;
}

bool FallbackConsensus::try_fallback_commit(const std::vector<VertexPtr>& votes, const VertexPtr& leader, Wave w) {
    if (!leader) return false;
    const auto n = count_votes(votes, leader, ledger_.fallback_voters(w));
    if (n < committee_.quorum()) return false;
    commit_leader(leader, LeaderKind::fallback, n);
    return true;
}

void FallbackConsensus::commit_leader(const VertexPtr& leader, LeaderKind kind, std::size_t votes) {
    // A later direct commit of an already-decided round changes nothing.
    if (leader->round <= committed_round_) return;

    {
        std::ostringstream note;
        note << "protocol=fallback kind=" << to_string(kind) << " wave=" << wave_of(leader->round)
             << " votes=" << votes;
        trace(TraceKind::commit, leader, leader->round, note.str());
    }
    push_leader(leader, kind, true, votes);

    const std::size_t threshold = committee_.validity_threshold();
    VertexPtr anchor = leader;
    for (Round r = leader->round >= 2 ? leader->round - 2 : 0; r > committed_round_ && r >= 1; r -= 2) {
        const Wave w = wave_of(r);
        auto reachable_votes = [&](Round vote_round, const VertexPtr& target, const std::set<PartyId>& eligible) {
            std::size_t n = 0;
            if (!target) return n;
            for (const auto& u : dag_.round_vertices(vote_round)) {
                if (dag_.strong_path(*anchor, *u) && eligible.contains(u->source) &&
                    dag_.strong_path(*u, *target)) {
                    ++n;
                }
            }
            return n;
        };

        VertexPtr steady;
        VertexPtr fallback;
        std::size_t ss_votes = 0;
        std::size_t fb_votes = 0;
        LeaderKind steady_kind = LeaderKind::steady_first;
        if (r % 4 == 1) {
            steady = get_first_steady_vertex_leader(dag_, w);
            fallback = get_fallback_vertex_leader(dag_, coin_, w);
            ss_votes = reachable_votes(r + 1, steady, ledger_.steady_voters(w));
            // With the anchor in this wave's third round, at least 2f+1 steady
            // vote types exist here and the fallback leader cannot have been committed.
            if (anchor->round != r + 2) fb_votes = reachable_votes(r + 3, fallback, ledger_.fallback_voters(w));
        } else {
            steady = get_second_steady_vertex_leader(dag_, w);
            steady_kind = LeaderKind::steady_second;
            ss_votes = reachable_votes(r + 1, steady, ledger_.steady_voters(w));
        }

        std::ostringstream note;
        note << "protocol=fallback wave=" << w << " ss=" << ss_votes << " fb=" << fb_votes;
        if (ss_votes >= threshold && fb_votes < threshold) {
            push_leader(steady, steady_kind, false, ss_votes);
            trace(TraceKind::indirect_commit, steady, r, note.str() + " kind=" + std::string(to_string(steady_kind)));
            anchor = steady;
        } else if (ss_votes < threshold && fb_votes >= threshold) {
            push_leader(fallback, LeaderKind::fallback, false, fb_votes);
            trace(TraceKind::indirect_commit, fallback, r, note.str() + " kind=fallback");
            anchor = fallback;
        } else {
            trace(TraceKind::skip, nullptr, r, note.str());
        }
        if (r < 2) break;
    }
    finish_commit(leader);
}

}  // namespace bullshark
