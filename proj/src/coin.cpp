#include "bullshark/coin.hpp"

#include <array>
#include <string>

namespace bullshark {

PartyId SeededCoin::choose_leader(Wave w) const {
    std::array<std::uint8_t, 24> msg{};
    constexpr char kTag[8] = {'c', 'o', 'i', 'n', '/', 'v', '1', 0};
    for (std::size_t i = 0; i < 8; ++i) {
        msg[i] = static_cast<std::uint8_t>(kTag[i]);
        msg[8 + i] = static_cast<std::uint8_t>(seed_ >> (8 * i));
        msg[16 + i] = static_cast<std::uint8_t>(w >> (8 * i));
    }
    const Digest d = sha256(msg);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(d[i]) << (8 * i);
    return PartyId{static_cast<std::uint32_t>(x % committee_.n)};
}

bool SeededCoin::gate_open(Wave w) const {
    auto it = revealed_by_.find(w);
    return it != revealed_by_.end() && it->second.size() >= committee_.validity_threshold();
}

PartyId SeededCoin::adversary_query(Wave w) const {
    if (!gate_open(w)) {
        throw CoinGateViolation("scheduler queried the coin of wave " + std::to_string(w) +
                                " before f+1 honest parties reached its last round");
    }
    return choose_leader(w);
}

PartyId ScriptedCoin::choose_leader(Wave w) const {
    auto it = table_.find(w);
    if (it == table_.end()) {
        throw ProtocolError("scripted coin has no leader for wave " + std::to_string(w));
    }
    return it->second;
}

}  // namespace bullshark
