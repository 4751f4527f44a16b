#include "bullshark/local_dag.hpp"

#include <algorithm>

#include "bullshark/coin.hpp"

namespace bullshark {

LocalDag::LocalDag(Committee committee) : committee_(committee), genesis_(make_genesis(committee)) {
    rounds_.resize(1);
}

bool LocalDag::is_genesis(const VertexRef& ref) const {
    if (ref.round != 0) return false;
    return std::any_of(genesis_.begin(), genesis_.end(),
                       [&](const VertexPtr& g) { return g->ref() == ref; });
}

std::optional<std::size_t> LocalDag::lookup(Round r, PartyId p) const {
    auto it = index_.find(key(r, p));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> LocalDag::index_of(const VertexRef& ref) const {
    auto idx = lookup(ref.round, ref.source);
    if (!idx || nodes_[*idx].vertex->digest != ref.digest) return std::nullopt;
    return idx;
}

bool LocalDag::parents_present(const Vertex& v) const {
    auto present = [&](const VertexRef& e) {
        if (e.round == 0) return is_genesis(e);
        if (is_cleared(e.round)) return true;
        return index_of(e).has_value();
    };
    return std::all_of(v.strong_edges.begin(), v.strong_edges.end(), present) &&
           std::all_of(v.weak_edges.begin(), v.weak_edges.end(), present);
}

LocalDag::InsertResult LocalDag::insert(const VertexPtr& v) {
    if (v->round == 0) return InsertResult::duplicate;
    if (is_cleared(v->round)) return InsertResult::below_gc;
    if (auto existing = lookup(v->round, v->source)) {
        return nodes_[*existing].vertex->digest == v->digest ? InsertResult::duplicate
                                                             : InsertResult::conflict;
    }
    if (!parents_present(*v)) return InsertResult::missing_parents;

    const std::size_t idx = nodes_.size();
    Node node;
    node.vertex = v;
    node.reach = reach_of(v->strong_edges, false);
    node.reach.merge(reach_of(v->weak_edges, false));
    node.strong_reach = reach_of(v->strong_edges, true);
    node.reach.set(idx);
    node.strong_reach.set(idx);
    nodes_.push_back(std::move(node));
    index_.emplace(key(v->round, v->source), idx);
    if (rounds_.size() <= v->round) rounds_.resize(v->round + 1);
    rounds_[v->round].push_back(idx);
    highest_round_ = std::max(highest_round_, v->round);
    ++live_count_;
    return InsertResult::inserted;
}

VertexPtr LocalDag::get_vertex(PartyId p, Round r) const {
    if (r == 0) return p.value < genesis_.size() ? genesis_[p.value] : nullptr;
    auto idx = lookup(r, p);
    if (!idx) return nullptr;
    return nodes_[*idx].vertex;
}

VertexPtr LocalDag::find(const VertexRef& ref) const {
    auto idx = index_of(ref);
    if (!idx) return nullptr;
    return nodes_[*idx].vertex;
}

bool LocalDag::contains(const VertexRef& ref) const { return index_of(ref).has_value(); }

std::size_t LocalDag::round_size(Round r) const {
    if (r == 0) return genesis_.size();
    if (r >= rounds_.size()) return 0;
    return rounds_[r].size();
}

std::vector<VertexPtr> LocalDag::round_vertices(Round r) const {
    std::vector<VertexPtr> out;
    if (r == 0) return genesis_;
    if (r >= rounds_.size()) return out;
    for (auto idx : rounds_[r]) out.push_back(nodes_[idx].vertex);
    std::sort(out.begin(), out.end(),
              [](const VertexPtr& a, const VertexPtr& b) { return a->source < b->source; });
    return out;
}

bool LocalDag::path(const VertexRef& from, const VertexRef& to) const {
    auto a = index_of(from);
    auto b = index_of(to);
    return a && b && nodes_[*a].reach.test(*b);
}

bool LocalDag::strong_path(const VertexRef& from, const VertexRef& to) const {
    auto a = index_of(from);
    auto b = index_of(to);
    return a && b && nodes_[*a].strong_reach.test(*b);
}

ReachSet LocalDag::reach_of(const std::vector<VertexRef>& edges, bool strong_only) const {
    ReachSet out;
    for (const auto& e : edges) {
        auto idx = index_of(e);
        if (!idx) continue;  // genesis or collected
        out.merge(strong_only ? nodes_[*idx].strong_reach : nodes_[*idx].reach);
    }
    return out;
}

std::vector<VertexPtr> LocalDag::causal_history(const VertexRef& v) const {
    std::vector<VertexPtr> out;
    auto idx = index_of(v);
    if (!idx) return out;
    const auto& reach = nodes_[*idx].reach;
    for (Round r = gc_round_ + 1; r <= v.round && r < rounds_.size(); ++r) {
        for (auto i : rounds_[r]) {
            if (reach.test(i)) out.push_back(nodes_[i].vertex);
        }
    }
    std::sort(out.begin(), out.end(), [](const VertexPtr& a, const VertexPtr& b) {
        return a->ref() < b->ref();
    });
    return out;
}

std::size_t LocalDag::collect_through(Round r) {
    std::size_t dropped = 0;
    for (Round k = gc_round_ + 1; k <= r; ++k) {
        if (k >= rounds_.size()) break;
        for (auto i : rounds_[k]) {
            index_.erase(key(k, nodes_[i].vertex->source));
            nodes_[i].vertex.reset();
            ++dropped;
        }
        rounds_[k].clear();
        rounds_[k].shrink_to_fit();
    }
    live_count_ -= dropped;
    gc_round_ = std::max(gc_round_, r);
    return dropped;
}

void set_weak_edges(const LocalDag& dag, Vertex& v, Round round) {
    v.weak_edges.clear();
    ReachSet reach = dag.reach_of(v.strong_edges, false);
    for (Round r = round >= 2 ? round - 2 : 0; r > dag.gc_round() && r >= 1; --r) {
        for (const auto& u : dag.round_vertices(r)) {
            auto idx = dag.index_of(u->ref());
            if (reach.test(*idx)) continue;
            v.weak_edges.push_back(u->ref());
            reach.merge(dag.reach_set(*idx));
        }
    }
}

VertexPtr create_new_vertex(const LocalDag& dag, PartyId self, Round round, Block block, SimTime ts) {
    Vertex v;
    v.round = round;
    v.source = self;
    v.block = std::move(block);
    for (const auto& u : dag.round_vertices(round - 1)) v.strong_edges.push_back(u->ref());
    set_weak_edges(dag, v, round);
    v.ts = ts;
    return seal(std::move(v));
}

VertexPtr get_first_steady_vertex_leader(const LocalDag& dag, Wave w) {
    if (w == 0) return nullptr;
    return dag.get_vertex(dag.committee().first_steady_leader(w), first_round_of(w));
}

VertexPtr get_second_steady_vertex_leader(const LocalDag& dag, Wave w) {
    if (w == 0) return nullptr;
    return dag.get_vertex(dag.committee().second_steady_leader(w), third_round_of(w));
}

VertexPtr get_fallback_vertex_leader(const LocalDag& dag, const LeaderElection& coin, Wave w) {
    if (w == 0) return nullptr;
    return dag.get_vertex(coin.choose_leader(w), first_round_of(w));
}

}  // namespace bullshark
