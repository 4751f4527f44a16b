#include <gtest/gtest.h>

#include <map>

#include "bullshark/coin.hpp"
#include "bullshark/local_dag.hpp"
#include "test_util.hpp"

using namespace bullshark;

namespace {

const Committee kFour{4, 1};

// Transitive closure by repeated squaring over an adjacency matrix.
std::vector<std::vector<bool>> closure(const std::vector<VertexPtr>& vs, bool strong_only) {
    const std::size_t n = vs.size();
    std::map<VertexRef, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[vs[i]->ref()] = i;
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = true;
        auto link = [&](const VertexRef& e) {
            if (auto it = index.find(e); it != index.end()) m[i][it->second] = true;
        };
        for (const auto& e : vs[i]->strong_edges) link(e);
        if (!strong_only) {
            for (const auto& e : vs[i]->weak_edges) link(e);
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (m[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (m[k][j]) m[i][j] = true;
    return m;
}

LocalDag load(const std::vector<VertexPtr>& vs) {
    LocalDag dag(kFour);
    for (const auto& v : vs) EXPECT_EQ(dag.insert(v), LocalDag::InsertResult::inserted);
    return dag;
}

}  // namespace

TEST(Committee, RequiresTightFaultBound) {
    EXPECT_THROW(Committee(4, 2), std::invalid_argument);
    EXPECT_THROW(Committee(5, 1), std::invalid_argument);
    const auto c = Committee::with_faults(2);
    EXPECT_EQ(c.n, 7u);
    EXPECT_EQ(c.quorum(), 5u);
    EXPECT_EQ(c.validity_threshold(), 3u);
}

TEST(Committee, LeaderScheduleIsRoundRobinOverPairs) {
    const Committee c{4, 1};
    EXPECT_EQ(c.first_steady_leader(1).value, 0u);
    EXPECT_EQ(c.second_steady_leader(1).value, 1u);
    EXPECT_EQ(c.first_steady_leader(2).value, 2u);
    EXPECT_EQ(c.second_steady_leader(2).value, 3u);
    EXPECT_EQ(c.first_steady_leader(3).value, 0u);
}

TEST(Waves, RoundsMapToWaves) {
    EXPECT_EQ(wave_of(1), 1u);
    EXPECT_EQ(wave_of(4), 1u);
    EXPECT_EQ(wave_of(5), 2u);
    EXPECT_EQ(first_round_of(3), 9u);
    EXPECT_EQ(third_round_of(3), 11u);
    EXPECT_EQ(last_round_of(3), 12u);
}

TEST(Vertex, GenesisDigestMatchesReferenceEncoding) {
    // Independent encoder (Python hashlib over the little-endian layout).
    EXPECT_EQ(to_hex(make_genesis_vertex(PartyId{0})->digest),
              "d4817aa5497628e7c77e6b606107042bbba3130888c5f47a375e6179be789fbb");
}

TEST(Vertex, DigestCoversEveryField) {
    Vertex v;
    v.round = 3;
    v.source = PartyId{1};
    v.block = Block{PartyId{1}, 7, "tx"};
    v.ts = 11;
    const auto base = seal(v)->digest;
    auto changed = [&](auto mutate) {
        Vertex w = v;
        mutate(w);
        return seal(w)->digest != base;
    };
    EXPECT_TRUE(changed([](Vertex& w) { w.round = 4; }));
    EXPECT_TRUE(changed([](Vertex& w) { w.source = PartyId{2}; }));
    EXPECT_TRUE(changed([](Vertex& w) { w.block.seq = 8; }));
    EXPECT_TRUE(changed([](Vertex& w) { w.block.payload = "tx2"; }));
    EXPECT_TRUE(changed([](Vertex& w) { w.ts = 12; }));
    EXPECT_TRUE(changed([](Vertex& w) { w.strong_edges.push_back(make_genesis_vertex(PartyId{0})->ref()); }));
}

TEST(Vertex, HexRoundTrip) {
    const auto d = make_genesis_vertex(PartyId{2})->digest;
    EXPECT_EQ(digest_from_hex(to_hex(d)), d);
}

TEST(LocalDag, GenesisHoldsLowestQuorum) {
    LocalDag dag(Committee{7, 2});
    const auto g = dag.round_vertices(0);
    ASSERT_EQ(g.size(), 5u);
    for (std::uint32_t i = 0; i < 5; ++i) EXPECT_EQ(g[i]->source.value, i);
    EXPECT_EQ(dag.get_vertex(PartyId{5}, 0), nullptr);
}

TEST(LocalDag, GetVertexOnEmptyRound) {
    LocalDag dag(kFour);
    EXPECT_EQ(dag.get_vertex(PartyId{0}, 1), nullptr);
    EXPECT_EQ(get_first_steady_vertex_leader(dag, 1), nullptr);
    EXPECT_EQ(get_second_steady_vertex_leader(dag, 0), nullptr);
}

TEST(LocalDag, RejectsMissingParentsAndConflicts) {
    LocalDag dag(kFour);
    auto v1 = create_new_vertex(dag, PartyId{0}, 1, Block{PartyId{0}, 0, "a"}, 1);
    LocalDag other(kFour);
    other.insert(v1);
    auto v2 = create_new_vertex(other, PartyId{1}, 2, Block{}, 2);
    EXPECT_EQ(dag.insert(v2), LocalDag::InsertResult::missing_parents);
    EXPECT_EQ(dag.insert(v1), LocalDag::InsertResult::inserted);
    EXPECT_EQ(dag.insert(v1), LocalDag::InsertResult::duplicate);
    auto twin = create_new_vertex(dag, PartyId{0}, 1, Block{PartyId{0}, 0, "b"}, 1);
    EXPECT_EQ(dag.insert(twin), LocalDag::InsertResult::conflict);
}

TEST(CreateNewVertex, FirstRoundPointsAtGenesis) {
    LocalDag dag(kFour);
    auto v = create_new_vertex(dag, PartyId{3}, 1, Block{PartyId{3}, 0, {}}, 5);
    EXPECT_EQ(v->strong_edges.size(), 3u);
    EXPECT_TRUE(v->weak_edges.empty());
    EXPECT_EQ(v->ts, 5u);
    EXPECT_EQ(v->source.value, 3u);
    EXPECT_EQ(dag.insert(v), LocalDag::InsertResult::inserted);
}

TEST(Reachability, PathToSelf) {
    const auto vs = test_support::random_dag(kFour, 3, 1);
    const auto dag = load(vs);
    for (const auto& v : vs) {
        EXPECT_TRUE(dag.path(*v, *v));
        EXPECT_TRUE(dag.strong_path(*v, *v));
    }
}

TEST(Reachability, AgreesWithBruteForceClosure) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto vs = test_support::random_dag(kFour, 6, seed);
        const auto dag = load(vs);
        const auto all = closure(vs, false);
        const auto strong = closure(vs, true);
        for (std::size_t i = 0; i < vs.size(); ++i) {
            for (std::size_t j = 0; j < vs.size(); ++j) {
                ASSERT_EQ(dag.path(*vs[i], *vs[j]), all[i][j]) << "seed " << seed;
                ASSERT_EQ(dag.strong_path(*vs[i], *vs[j]), strong[i][j]) << "seed " << seed;
                if (strong[i][j]) ASSERT_TRUE(all[i][j]);
            }
        }
    }
}

TEST(Reachability, WeakOnlyPathIsNotStrong) {
    LocalDag dag(kFour);
    std::vector<VertexPtr> r1;
    for (std::uint32_t p = 0; p < 4; ++p) {
        auto v = create_new_vertex(dag, PartyId{p}, 1, Block{PartyId{p}, 0, {}}, 1);
        r1.push_back(v);
    }
    for (const auto& v : r1) dag.insert(v);
    // Round 2 ignores party 3's vertex.
    for (std::uint32_t p = 0; p < 3; ++p) {
        Vertex v;
        v.round = 2;
        v.source = PartyId{p};
        for (std::uint32_t q = 0; q < 3; ++q) v.strong_edges.push_back(r1[q]->ref());
        dag.insert(seal(v));
    }
    auto v3 = create_new_vertex(dag, PartyId{0}, 3, Block{}, 3);
    ASSERT_EQ(v3->weak_edges.size(), 1u);
    EXPECT_EQ(v3->weak_edges[0], r1[3]->ref());
    dag.insert(v3);
    EXPECT_TRUE(dag.path(*v3, *r1[3]));
    EXPECT_FALSE(dag.strong_path(*v3, *r1[3]));
}

TEST(SetWeakEdges, FullyConnectedDagNeedsNone) {
    LocalDag dag(kFour);
    for (Round r = 1; r <= 5; ++r) {
        std::vector<VertexPtr> round;
        for (std::uint32_t p = 0; p < 4; ++p) {
            round.push_back(create_new_vertex(dag, PartyId{p}, r, Block{PartyId{p}, r, {}}, r));
        }
        for (const auto& v : round) {
            EXPECT_TRUE(v->weak_edges.empty());
            dag.insert(v);
        }
    }
}

TEST(SetWeakEdges, CoversEveryOlderVertexOnRandomDags) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto vs = test_support::random_dag(kFour, 6, 100 + seed);
        auto dag = load(vs);
        const Round top = dag.highest_round() + 1;
        auto v = create_new_vertex(dag, PartyId{0}, top, Block{}, 0);
        ASSERT_EQ(dag.insert(v), LocalDag::InsertResult::inserted);
        for (Round r = 1; r + 2 <= top; ++r) {
            for (const auto& u : dag.round_vertices(r)) ASSERT_TRUE(dag.path(*v, *u)) << "seed " << seed;
        }
        // Minimality: each weak edge target is not reachable through the others.
        for (const auto& w : v->weak_edges) {
            Vertex probe = *v;
            std::erase(probe.weak_edges, w);
            auto reach = dag.reach_of(probe.strong_edges, false);
            reach.merge(dag.reach_of(probe.weak_edges, false));
            ASSERT_FALSE(reach.test(*dag.index_of(w))) << "redundant weak edge, seed " << seed;
        }
    }
}

TEST(CausalHistory, CanonicalOrderAndClosure) {
    const auto vs = test_support::random_dag(kFour, 6, 9);
    const auto dag = load(vs);
    const auto& top = vs.back();
    const auto history = dag.causal_history(top->ref());
    for (std::size_t i = 1; i < history.size(); ++i) EXPECT_LT(history[i - 1]->ref(), history[i]->ref());
    for (const auto& v : vs) {
        const bool in = std::any_of(history.begin(), history.end(), [&](const auto& h) { return h == v; });
        EXPECT_EQ(in, dag.path(*top, *v));
    }
}

TEST(Leaders, FallbackLeaderFollowsCoin) {
    LocalDag dag(kFour);
    for (std::uint32_t p = 0; p < 4; ++p) dag.insert(create_new_vertex(dag, PartyId{p}, 1, Block{}, 0));
    ScriptedCoin coin({{1, PartyId{2}}});
    auto f = get_fallback_vertex_leader(dag, coin, 1);
    ASSERT_NE(f, nullptr);
    EXPECT_EQ(f->source.value, 2u);
    EXPECT_EQ(f->round, 1u);
    EXPECT_EQ(get_first_steady_vertex_leader(dag, 1)->source.value, 0u);
}
