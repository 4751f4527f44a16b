#include "bullshark/dag_core.hpp"

#include <set>

#include "bullshark/ordering.hpp"

namespace bullshark {

DagCore::DagCore(PartyId self, LocalDag& dag, ConsensusProtocol& consensus, PartyEnvironment& env,
                 DagCoreConfig config)
    : self_(self), dag_(dag), consensus_(consensus), env_(env), config_(config) {}

void DagCore::start() {
    if (config_.passive || round_ != 0 || config_.max_round < 1) return;
    enter_round(1);
    evaluate_conditions();
}

void DagCore::a_bcast(std::string payload) {
    blocks_to_propose_.push_back(Block{self_, next_seq_++, std::move(payload)});
}

Block DagCore::next_block() {
    if (blocks_to_propose_.empty()) return Block{self_, next_seq_++, {}};
    Block b = std::move(blocks_to_propose_.front());
    blocks_to_propose_.pop_front();
    return b;
}

std::string DagCore::malformed_reason(const Vertex& v, Round r, PartyId p) const {
    if (v.source != p) return "source";
    if (v.round != r) return "round";
    if (v.round == 0) return "genesis";
    std::set<PartyId> sources;
    for (const auto& e : v.strong_edges) {
        if (e.round + 1 != v.round) return "strong_edge_round";
        sources.insert(e.source);
    }
    if (sources.size() != v.strong_edges.size()) return "strong_edge_duplicate";
    if (sources.size() < dag_.committee().quorum()) return "strong_edge_count";
    for (const auto& e : v.weak_edges) {
        if (e.round + 1 >= v.round) return "weak_edge_round";
    }
    if (v.digest != seal(v)->digest) return "digest";
    return {};
}

void DagCore::on_r_deliver(const VertexPtr& v, Round r, PartyId p) {
    if (auto reason = malformed_reason(*v, r, p); !reason.empty()) {
        trace(TraceKind::malformed, p.value, r, to_hex(v->digest), "reason=" + reason);
        return;
    }
    if (try_add_to_dag(v)) {
        retry_buffer();
    } else if (admission_gate(dag_, *v) && !dag_.contains(v->ref())) {
        buffer_.emplace(v->ref(), v);
        trace(TraceKind::buffer, v->source.value, v->round, to_hex(v->digest),
              "size=" + std::to_string(buffer_.size()));
    }
    evaluate_conditions();
}

void DagCore::on_timeout(Round round, std::uint64_t epoch) {
    if (epoch != epoch_ || round != round_) return;  // superseded timer
    trace(TraceKind::timer_expire, std::nullopt, round, "", "epoch=" + std::to_string(epoch));
    wait_ = false;
    evaluate_conditions();
}

bool DagCore::try_add_to_dag(const VertexPtr& v) {
    if (!admission_gate(dag_, *v)) {
        buffer_.erase(v->ref());
        trace(TraceKind::gc_reject, v->source.value, v->round, to_hex(v->digest),
              "gc_round=" + std::to_string(dag_.gc_round()));
        return false;
    }
    const auto result = dag_.insert(v);
    switch (result) {
        case LocalDag::InsertResult::missing_parents:
            return false;
        case LocalDag::InsertResult::duplicate:
            buffer_.erase(v->ref());
            return false;
        case LocalDag::InsertResult::conflict:
            buffer_.erase(v->ref());
            trace(TraceKind::deliver_dropped, v->source.value, v->round, to_hex(v->digest), "reason=conflict");
            return false;
        case LocalDag::InsertResult::below_gc:
            buffer_.erase(v->ref());
            return false;
        case LocalDag::InsertResult::inserted:
            break;
    }
    trace(TraceKind::admit, v->source.value, v->round, to_hex(v->digest),
          "round_size=" + std::to_string(dag_.round_size(v->round)));

    if (!config_.passive && dag_.round_size(v->round) >= dag_.committee().quorum() && v->round > round_ &&
        v->round <= config_.max_round) {
        enter_round(v->round);  // jump
    }
    buffer_.erase(v->ref());
    consensus_.try_ordering(v);
    return true;
}

void DagCore::retry_buffer() {
    bool progress = true;
    while (progress && !buffer_.empty()) {
        progress = false;
        // Copy: admissions mutate the buffer.
        std::vector<VertexPtr> pending;
        pending.reserve(buffer_.size());
        for (const auto& [_, v] : buffer_) pending.push_back(v);
        for (const auto& v : pending) {
            if (!buffer_.contains(v->ref())) continue;
            if (!admission_gate(dag_, *v)) {
                buffer_.erase(v->ref());
                continue;
            }
            if (dag_.parents_present(*v) && try_add_to_dag(v)) progress = true;
        }
    }
}

bool DagCore::leader_votes_present(Round r, const VertexPtr& leader) const {
    if (!leader) return false;
    const Wave w = wave_of(r);
    std::size_t votes = 0;
    for (const auto& u : dag_.round_vertices(r)) {
        if (consensus_.is_steady_voter(u->source, w) && dag_.strong_path(*u, *leader)) ++votes;
    }
    return votes >= dag_.committee().quorum();
}

bool DagCore::advancement_condition(Round r) const {
    if (!wait_) return true;
    const Wave w = wave_of(r);
    const auto& c = dag_.committee();
    switch (r % 4) {
        case 1: return dag_.get_vertex(c.first_steady_leader(w), r) != nullptr;
        case 3: return dag_.get_vertex(c.second_steady_leader(w), r) != nullptr;
        case 2: return leader_votes_present(r, get_first_steady_vertex_leader(dag_, w));
        default: return leader_votes_present(r, get_second_steady_vertex_leader(dag_, w));
    }
}

void DagCore::evaluate_conditions() {
    if (config_.passive) return;
    while (round_ >= 1 && round_ < config_.max_round && advancement_condition(round_)) {
        if (!try_advance_round()) break;
    }
}

bool DagCore::try_advance_round() {
    if (dag_.round_size(round_) < dag_.committee().quorum()) return false;
    enter_round(round_ + 1);
    return true;
}

void DagCore::enter_round(Round r) {
    round_ = r;
    wait_ = true;
    ++epoch_;
    trace(TraceKind::round_enter, std::nullopt, r, "", "");
    env_.start_timer(self_, r, epoch_, config_.timeout_ticks);
    trace(TraceKind::timer_start, std::nullopt, r, "",
          "epoch=" + std::to_string(epoch_) + " ticks=" + std::to_string(config_.timeout_ticks));
    env_.on_round_entered(self_, r);
    broadcast_vertex(r);
}

void DagCore::broadcast_vertex(Round r) {
    auto v = create_new_vertex(dag_, self_, r, next_block(), env_.now());
    trace(TraceKind::broadcast, self_.value, r, to_hex(v->digest),
          "strong=" + std::to_string(v->strong_edges.size()) + " weak=" + std::to_string(v->weak_edges.size()) +
              " seq=" + std::to_string(v->block.seq));
    try_add_to_dag(v);
    env_.r_bcast(self_, v);
}

void DagCore::trace(TraceKind kind, std::optional<std::uint32_t> sender, std::optional<Round> round,
                    std::string digest, std::string note) {
    TraceRecord r;
    r.time = env_.now();
    r.kind = kind;
    r.sender = sender;
    r.recipient = self_.value;
    r.round = round;
    r.digest = std::move(digest);
    r.note = std::move(note);
    env_.record(std::move(r));
}

}  // namespace bullshark
