#include <gtest/gtest.h>

#include "bullshark/coin.hpp"

using namespace bullshark;

TEST(SeededCoin, AgreementAcrossInstances) {
    SeededCoin a(5, Committee{4, 1});
    SeededCoin b(5, Committee{4, 1});
    for (Wave w = 1; w < 200; ++w) EXPECT_EQ(a.choose_leader(w), b.choose_leader(w));
}

TEST(SeededCoin, MatchesReferencePrf) {
    // Reference values from an independent SHA-256 implementation of the
    // keyed PRF (tag, seed, wave) reduced mod n.
    SeededCoin four(0, Committee{4, 1});
    const std::vector<std::uint32_t> want4{0, 1, 2, 2, 1, 1, 3, 3, 1, 2};
    for (Wave w = 1; w <= 10; ++w) EXPECT_EQ(four.choose_leader(w).value, want4[w - 1]) << "wave " << w;
    SeededCoin seven(42, Committee{7, 2});
    const std::vector<std::uint32_t> want7{5, 5, 2, 1, 0, 2, 4, 2, 2, 5};
    for (Wave w = 1; w <= 10; ++w) EXPECT_EQ(seven.choose_leader(w).value, want7[w - 1]) << "wave " << w;
}

TEST(SeededCoin, FrequenciesOverTenThousandWaves) {
    SeededCoin coin(0, Committee{4, 1});
    std::vector<int> counts(4, 0);
    for (Wave w = 1; w <= 10000; ++w) ++counts[coin.choose_leader(w).value];
    EXPECT_EQ(counts, (std::vector<int>{2499, 2460, 2490, 2551}));
}

TEST(SeededCoin, GateOpensAtValidityThreshold) {
    SeededCoin coin(1, Committee{4, 1});
    EXPECT_FALSE(coin.gate_open(3));
    EXPECT_THROW(coin.adversary_query(3), CoinGateViolation);
    coin.note_round_end_vertex(3, PartyId{0});
    coin.note_round_end_vertex(3, PartyId{0});
    EXPECT_FALSE(coin.gate_open(3));
    coin.note_round_end_vertex(3, PartyId{2});
    EXPECT_TRUE(coin.gate_open(3));
    EXPECT_EQ(coin.adversary_query(3), coin.choose_leader(3));
    EXPECT_FALSE(coin.gate_open(4));
}

TEST(ScriptedCoin, MissingWaveThrows) {
    ScriptedCoin coin({{1, PartyId{3}}});
    EXPECT_EQ(coin.choose_leader(1).value, 3u);
    EXPECT_THROW(coin.choose_leader(2), ProtocolError);
}
