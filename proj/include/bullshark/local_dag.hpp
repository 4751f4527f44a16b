// A party's round-indexed view of delivered vertices, with memoized
// reachability for path / strong_path queries.

#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bullshark/types.hpp"

namespace bullshark {

/// Dense bitset over a DAG's local vertex indices.
class ReachSet {
public:
    bool test(std::size_t i) const {
        const auto w = i / 64;
        return w < words_.size() && ((words_[w] >> (i % 64)) & 1u) != 0;
    }
    void set(std::size_t i) {
        const auto w = i / 64;
        if (w >= words_.size()) words_.resize(w + 1, 0);
        words_[w] |= std::uint64_t{1} << (i % 64);
    }
    void merge(const ReachSet& other) {
        if (other.words_.size() > words_.size()) words_.resize(other.words_.size(), 0);
        for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
    }

private:
    std::vector<std::uint64_t> words_;
};

class LocalDag {
public:
    enum class InsertResult { inserted, duplicate, conflict, missing_parents, below_gc };

    explicit LocalDag(Committee committee);

    const Committee& committee() const { return committee_; }

    /// True if every edge target is present, is genesis, or lies in a
    /// garbage-collected round.
    bool parents_present(const Vertex& v) const;

    InsertResult insert(const VertexPtr& v);

    VertexPtr get_vertex(PartyId p, Round r) const;
    VertexPtr find(const VertexRef& ref) const;
    bool contains(const VertexRef& ref) const;

    std::size_t round_size(Round r) const;
    /// Live vertices of round r ordered by source.
    std::vector<VertexPtr> round_vertices(Round r) const;
    Round highest_round() const { return highest_round_; }
    std::size_t vertex_count() const { return live_count_; }

    /// Path over strong and weak edges; path(v, v) holds. Vertices that are
    /// not in the DAG (or genesis targets) yield false.
    bool path(const VertexRef& from, const VertexRef& to) const;
    bool strong_path(const VertexRef& from, const VertexRef& to) const;
    bool path(const Vertex& from, const Vertex& to) const { return path(from.ref(), to.ref()); }
    bool strong_path(const Vertex& from, const Vertex& to) const {
        return strong_path(from.ref(), to.ref());
    }

    /// Reachability of a vertex that is not (yet) in the DAG, given its edges.
    ReachSet reach_of(const std::vector<VertexRef>& edges, bool strong_only) const;
    std::optional<std::size_t> index_of(const VertexRef& ref) const;
    const ReachSet& reach_set(std::size_t index) const { return nodes_[index].reach; }

    /// Live vertices (rounds >= 1) reachable from v, including v, in canonical
    /// order: ascending round, then source, then digest.
    std::vector<VertexPtr> causal_history(const VertexRef& v) const;

    // Garbage collection. Rounds at or below gc_round() hold only tombstones.
    Round gc_round() const { return gc_round_; }
    /// Clears every live round up to and including r; returns the number of
    /// vertex bodies dropped.
    std::size_t collect_through(Round r);
    bool is_cleared(Round r) const { return r >= 1 && r <= gc_round_; }
    std::size_t retained_rounds() const {
        return highest_round_ > gc_round_ ? static_cast<std::size_t>(highest_round_ - gc_round_) : 0;
    }

private:
    struct Node {
        VertexPtr vertex;
        ReachSet reach;
        ReachSet strong_reach;
    };

    static std::uint64_t key(Round r, PartyId p) { return (r << 24) | p.value; }
    std::optional<std::size_t> lookup(Round r, PartyId p) const;
    bool is_genesis(const VertexRef& ref) const;

    Committee committee_;
    std::vector<VertexPtr> genesis_;
    std::vector<Node> nodes_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::vector<std::vector<std::size_t>> rounds_;  // rounds_[r] -> node indices
    Round highest_round_ = 0;
    Round gc_round_ = 0;
    std::size_t live_count_ = 0;
};

/// Adds a weak edge to every vertex in rounds round-2 .. (gc_round+1) of the
/// DAG that the vertex does not already reach. Strong edges must be set.
void set_weak_edges(const LocalDag& dag, Vertex& v, Round round);

/// Builds the party's vertex for `round`: strong edges to all of
/// dag[round-1], weak edges to orphans, stamped with `ts`.
VertexPtr create_new_vertex(const LocalDag& dag, PartyId self, Round round, Block block, SimTime ts);

class LeaderElection;

VertexPtr get_first_steady_vertex_leader(const LocalDag& dag, Wave w);
VertexPtr get_second_steady_vertex_leader(const LocalDag& dag, Wave w);
VertexPtr get_fallback_vertex_leader(const LocalDag& dag, const LeaderElection& coin, Wave w);

}  // namespace bullshark
