// Structured event log. One record per fired event or protocol decision;
// serialized as line-delimited JSON with a fixed field order.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bullshark/types.hpp"

namespace bullshark {

enum class TraceKind {
    scenario,
    round_enter,
    timer_start,
    timer_expire,
    broadcast,
    deliver,
    deliver_dropped,
    malformed,
    admit,
    buffer,
    vote_type,
    commit,
    indirect_commit,
    skip,
    a_deliver,
    gc,
    gc_reject,
    coin_query,
    crash,
};

std::string_view to_string(TraceKind k);
std::optional<TraceKind> trace_kind_from_string(std::string_view s);

struct TraceRecord {
    SimTime time = 0;
    TraceKind kind = TraceKind::scenario;
    std::optional<std::uint32_t> sender;
    std::optional<std::uint32_t> recipient;
    std::optional<Round> round;
    std::string digest;
    std::string note;

    bool operator==(const TraceRecord&) const = default;
};

std::string to_json_line(const TraceRecord& r);
TraceRecord trace_record_from_json_line(const std::string& line);

/// Parses `key=value` tokens from a note ("wave=2 kind=fallback").
std::optional<std::string> note_field(std::string_view note, std::string_view key);

class Trace {
public:
    void add(TraceRecord r) { records_.push_back(std::move(r)); }
    const std::vector<TraceRecord>& records() const { return records_; }
    void write_jsonl(std::ostream& os) const;
    static Trace read_jsonl(std::istream& is);

private:
    std::vector<TraceRecord> records_;
};

}  // namespace bullshark
