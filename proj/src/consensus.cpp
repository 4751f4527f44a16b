#include "bullshark/consensus.hpp"

namespace bullshark {

std::string_view to_string(LeaderKind k) {
    switch (k) {
        case LeaderKind::steady_first: return "steady1";
        case LeaderKind::steady_second: return "steady2";
        case LeaderKind::fallback: return "fallback";
    }
    return "unknown";
}

std::vector<VertexPtr> ConsensusBase::resolve(const std::vector<VertexRef>& refs) const {
    std::vector<VertexPtr> out;
    out.reserve(refs.size());
    for (const auto& r : refs) {
        if (auto v = dag_.find(r)) out.push_back(std::move(v));
    }
    return out;
}

void ConsensusBase::push_leader(const VertexPtr& v, LeaderKind kind, bool direct, std::size_t votes) {
    stack_.push_back(CommittedLeader{v->ref(), wave_of(v->round), kind, direct, votes, env_.now()});
    stack_vertices_.push_back(v);
}

void ConsensusBase::finish_commit(const VertexPtr& direct_leader) {
    // The walk decided every round below the direct leader; taking the lowest
    // anchor instead would let a later walk decide those rounds again.
    committed_round_ = direct_leader->round;
    while (!stack_.empty()) {
        committed_.push_back(stack_.back());
        VertexPtr v = stack_vertices_.back();
        stack_.pop_back();
        stack_vertices_.pop_back();
        orderer_.order_leader(v);
    }
}

void ConsensusBase::trace(TraceKind kind, const VertexPtr& leader, Round round, std::string note) {
    TraceRecord r;
    r.time = env_.now();
    r.kind = kind;
    r.recipient = self_.value;
    r.round = round;
    if (leader) {
        r.sender = leader->source.value;
        r.digest = to_hex(leader->digest);
    }
    r.note = std::move(note);
    env_.record(std::move(r));
}

}  // namespace bullshark
