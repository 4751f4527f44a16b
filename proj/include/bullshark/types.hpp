// Domain types shared by every layer: parties, blocks, vertices and their
// canonical encoding.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bullshark {

using Round = std::uint64_t;
using Wave = std::uint64_t;
using SimTime = std::uint64_t;

struct PartyId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(PartyId, PartyId) = default;
};

/// Wave w spans rounds 4w-3 .. 4w; round 0 (genesis) belongs to no wave.
constexpr Wave wave_of(Round r) { return (r + 3) / 4; }
constexpr Round first_round_of(Wave w) { return 4 * w - 3; }
constexpr Round third_round_of(Wave w) { return 4 * w - 1; }
constexpr Round last_round_of(Wave w) { return 4 * w; }

/// Raised when the protocol or harness hits a state its contract forbids.
class ProtocolError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Committee {
    std::uint32_t n = 4;
    std::uint32_t f = 1;

    Committee() = default;
    Committee(std::uint32_t n_, std::uint32_t f_);

    static Committee with_faults(std::uint32_t f) { return Committee(3 * f + 1, f); }

    std::uint32_t quorum() const { return 2 * f + 1; }
    std::uint32_t validity_threshold() const { return f + 1; }
    bool contains(PartyId p) const { return p.value < n; }
    std::vector<PartyId> parties() const;

    // Round-robin over pairs: wave w is led by parties 2(w-1) and 2(w-1)+1 (mod n).
    PartyId first_steady_leader(Wave w) const {
        return PartyId{static_cast<std::uint32_t>((2 * (w - 1)) % n)};
    }
    PartyId second_steady_leader(Wave w) const {
        return PartyId{static_cast<std::uint32_t>((2 * (w - 1) + 1) % n)};
    }
};

struct Block {
    PartyId origin;
    std::uint64_t seq = 0;
    std::string payload;

    bool operator==(const Block&) const = default;
};

using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(const Digest& d);
Digest digest_from_hex(const std::string& hex);
Digest sha256(std::span<const std::uint8_t> bytes);

struct VertexRef {
    Round round = 0;
    PartyId source;
    Digest digest{};

    friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

struct Vertex {
    Round round = 0;
    PartyId source;
    Block block;
    std::vector<VertexRef> strong_edges;  // sorted
    std::vector<VertexRef> weak_edges;    // sorted
    SimTime ts = 0;
    Digest digest{};

    VertexRef ref() const { return VertexRef{round, source, digest}; }
};

using VertexPtr = std::shared_ptr<const Vertex>;

/// Length-prefixed little-endian encoding over (round, source, block.origin,
/// block.seq, block.payload, strong edges, weak edges, ts).
std::vector<std::uint8_t> canonical_encoding(const Vertex& v);

/// Sorts the edge lists and stamps the digest. The only way vertices should
/// be finalized before they are shared.
VertexPtr seal(Vertex v);

VertexPtr make_genesis_vertex(PartyId source);

/// Genesis holds 2f+1 synthetic vertices from parties 0..2f.
std::vector<VertexPtr> make_genesis(const Committee& committee);

std::string describe(const VertexRef& ref);

}  // namespace bullshark
