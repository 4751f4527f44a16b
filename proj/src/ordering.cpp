#include "bullshark/ordering.hpp"

#include <algorithm>
#include <sstream>

namespace bullshark {

SimTime median(std::vector<SimTime> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    const std::size_t k = (values.size() + 1) / 2 - 1;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
    return values[k];
}

Orderer::Orderer(PartyId self, LocalDag& dag, PartyEnvironment& env, std::optional<GcConfig> gc)
    : self_(self), dag_(dag), env_(env), gc_(gc) {}

void Orderer::order_leader(const VertexPtr& leader) {
    deliver(gc_ ? collect_with_gc(leader) : collect_unbounded(leader), leader);
}

std::vector<VertexPtr> Orderer::collect_unbounded(const VertexPtr& leader) const {
    std::vector<VertexPtr> out;
    for (auto& v : dag_.causal_history(leader->ref())) {
        if (!delivered(v->ref())) out.push_back(std::move(v));
    }
    return out;
}

std::vector<VertexPtr> Orderer::collect_with_gc(const VertexPtr& leader) {
    std::vector<VertexPtr> out{leader};
    const SimTime three_delta = 3 * gc_->delta;

    auto reachable_in = [&](Round r) {
        std::vector<VertexPtr> found;
        for (auto& u : dag_.round_vertices(r)) {
            if (dag_.path(*leader, *u)) found.push_back(std::move(u));
        }
        return found;
    };
    auto timestamps = [](const std::vector<VertexPtr>& vs) {
        std::vector<SimTime> ts;
        ts.reserve(vs.size());
        for (const auto& u : vs) ts.push_back(u->ts);
        return ts;
    };

    if (leader->round <= 1) return out;

    const auto parents = reachable_in(leader->round - 1);
    if (parents.empty()) return out;
    const SimTime leader_ts = median(timestamps(parents));
    out.insert(out.end(), parents.begin(), parents.end());

    for (Round r = dag_.gc_round() + 1; r + 1 < leader->round; ++r) {
        const auto candidates = reachable_in(r);
        if (candidates.empty()) continue;
        const SimTime round_ts = median(timestamps(candidates));
        out.insert(out.end(), candidates.begin(), candidates.end());
        if (leader_ts > round_ts + three_delta) {
            const std::size_t cleared = dag_.collect_through(r);
            gc_transitions_.push_back(GcTransition{leader->ref(), r, cleared});
            std::ostringstream note;
            note << "leader_round=" << leader->round << " cleared=" << cleared << " leader_ts=" << leader_ts
                 << " round_ts=" << round_ts;
            env_.record(TraceRecord{env_.now(), TraceKind::gc, std::nullopt, self_.value, r, "", note.str()});
        }
    }
    std::erase_if(out, [&](const VertexPtr& v) { return delivered(v->ref()); });
    return out;
}

void Orderer::deliver(std::vector<VertexPtr> batch, const VertexPtr& leader) {
    std::sort(batch.begin(), batch.end(),
              [](const VertexPtr& a, const VertexPtr& b) { return a->ref() < b->ref(); });
    batch.erase(std::unique(batch.begin(), batch.end(),
                            [](const VertexPtr& a, const VertexPtr& b) { return a->ref() == b->ref(); }),
                batch.end());
    for (const auto& v : batch) {
        if (!delivered_.insert(v->ref()).second) continue;
        log_.push_back(LogEntry{v->ref(), v->block, leader->round});
        std::ostringstream note;
        note << "index=" << log_.size() - 1 << " leader_round=" << leader->round
             << " leader_source=" << leader->source.value << " seq=" << v->block.seq;
        env_.record(TraceRecord{env_.now(), TraceKind::a_deliver, v->source.value, self_.value, v->round,
                                to_hex(v->digest), note.str()});
    }
    if (gc_ && dag_.gc_round() > pruned_floor_) {
        pruned_floor_ = dag_.gc_round();
        std::erase_if(delivered_, [&](const VertexRef& ref) { return ref.round <= pruned_floor_; });
    }
}

}  // namespace bullshark
