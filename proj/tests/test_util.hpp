#pragma once

#include <random>

#include "bullshark/local_dag.hpp"

namespace bullshark::test_support {

/// Random DAG: every round has between 2f+1 and n vertices, each with 2f+1..n
/// strong edges and a few random weak edges into older rounds.
inline std::vector<VertexPtr> random_dag(const Committee& c, Round rounds, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    LocalDag dag(c);
    std::vector<VertexPtr> out;
    for (Round r = 1; r <= rounds; ++r) {
        std::vector<std::uint32_t> ids(c.n);
        for (std::uint32_t i = 0; i < c.n; ++i) ids[i] = i;
        std::shuffle(ids.begin(), ids.end(), rng);
        const auto count = c.quorum() + rng() % (c.n - c.quorum() + 1);
        for (std::uint32_t k = 0; k < count; ++k) {
            Vertex v;
            v.round = r;
            v.source = PartyId{ids[k]};
            v.block = Block{v.source, r, {}};
            auto prev = dag.round_vertices(r - 1);
            std::shuffle(prev.begin(), prev.end(), rng);
            const auto strong = c.quorum() + rng() % (prev.size() - c.quorum() + 1);
            for (std::size_t i = 0; i < strong; ++i) v.strong_edges.push_back(prev[i]->ref());
            for (Round old = 1; old + 1 < r; ++old) {
                for (const auto& u : dag.round_vertices(old)) {
                    if (rng() % 4 == 0) v.weak_edges.push_back(u->ref());
                }
            }
            v.ts = r;
            auto sealed = seal(std::move(v));
            dag.insert(sealed);
            out.push_back(sealed);
        }
    }
    return out;
}

}  // namespace bullshark::test_support
