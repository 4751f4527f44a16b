#include "bullshark/types.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <sstream>

namespace bullshark {

Committee::Committee(std::uint32_t n_, std::uint32_t f_) : n(n_), f(f_) {
    if (n != 3 * f + 1) {
        throw std::invalid_argument("committee requires n = 3f + 1");
    }
}

std::vector<PartyId> Committee::parties() const {
    std::vector<PartyId> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(PartyId{i});
    return out;
}

std::string to_hex(const Digest& d) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s;
    s.reserve(d.size() * 2);
    for (auto b : d) {
        s.push_back(kHex[b >> 4]);
        s.push_back(kHex[b & 0xf]);
    }
    return s;
}

Digest digest_from_hex(const std::string& hex) {
    if (hex.size() != 64) throw std::invalid_argument("digest hex must be 64 chars");
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        throw std::invalid_argument("bad hex digit");
    };
    Digest d{};
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    }
    return d;
}

Digest sha256(std::span<const std::uint8_t> bytes) {
    Digest d{};
    SHA256(bytes.data(), bytes.size(), d.data());
    return d;
}

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t x) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

void put_edges(std::vector<std::uint8_t>& out, const std::vector<VertexRef>& edges) {
    put_u64(out, edges.size());
    for (const auto& e : edges) {
        put_u64(out, e.round);
        put_u32(out, e.source.value);
        out.insert(out.end(), e.digest.begin(), e.digest.end());
    }
}

}  // namespace

std::vector<std::uint8_t> canonical_encoding(const Vertex& v) {
    std::vector<std::uint8_t> out;
    out.reserve(64 + v.block.payload.size() + 44 * (v.strong_edges.size() + v.weak_edges.size()));
    put_u64(out, v.round);
    put_u32(out, v.source.value);
    put_u32(out, v.block.origin.value);
    put_u64(out, v.block.seq);
    put_u64(out, v.block.payload.size());
    out.insert(out.end(), v.block.payload.begin(), v.block.payload.end());
    put_edges(out, v.strong_edges);
    put_edges(out, v.weak_edges);
    put_u64(out, v.ts);
    return out;
}

VertexPtr seal(Vertex v) {
    std::sort(v.strong_edges.begin(), v.strong_edges.end());
    std::sort(v.weak_edges.begin(), v.weak_edges.end());
    v.digest = sha256(canonical_encoding(v));
    return std::make_shared<const Vertex>(std::move(v));
}

VertexPtr make_genesis_vertex(PartyId source) {
    Vertex v;
    v.round = 0;
    v.source = source;
    v.block.origin = source;
    return seal(std::move(v));
}

std::vector<VertexPtr> make_genesis(const Committee& committee) {
    std::vector<VertexPtr> out;
    for (std::uint32_t i = 0; i < committee.quorum(); ++i) {
        out.push_back(make_genesis_vertex(PartyId{i}));
    }
    return out;
}

std::string describe(const VertexRef& ref) {
    std::ostringstream os;
    os << "(r" << ref.round << ",p" << ref.source.value << "," << to_hex(ref.digest).substr(0, 8) << ")";
    return os.str();
}

}  // namespace bullshark
