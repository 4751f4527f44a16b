#include "bullshark/trace.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <utility>

#include <json.hpp>

namespace bullshark {

namespace {

constexpr std::array<std::pair<TraceKind, std::string_view>, 19> kKindNames{{
    {TraceKind::scenario, "scenario"},
    {TraceKind::round_enter, "round_enter"},
    {TraceKind::timer_start, "timer_start"},
    {TraceKind::timer_expire, "timer_expire"},
    {TraceKind::broadcast, "broadcast"},
    {TraceKind::deliver, "deliver"},
    {TraceKind::deliver_dropped, "deliver_dropped"},
    {TraceKind::malformed, "malformed"},
    {TraceKind::admit, "admit"},
    {TraceKind::buffer, "buffer"},
    {TraceKind::vote_type, "vote_type"},
    {TraceKind::commit, "commit"},
    {TraceKind::indirect_commit, "indirect_commit"},
    {TraceKind::skip, "skip"},
    {TraceKind::a_deliver, "a_deliver"},
    {TraceKind::gc, "gc"},
    {TraceKind::gc_reject, "gc_reject"},
    {TraceKind::coin_query, "coin_query"},
    {TraceKind::crash, "crash"},
}};

template <typename T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
    if (!v) return nullptr;
    return *v;
}

}  // namespace

std::string_view to_string(TraceKind k) {
    for (const auto& [kind, name] : kKindNames) {
        if (kind == k) return name;
    }
    return "unknown";
}

std::optional<TraceKind> trace_kind_from_string(std::string_view s) {
    for (const auto& [kind, name] : kKindNames) {
        if (name == s) return kind;
    }
    return std::nullopt;
}

std::string to_json_line(const TraceRecord& r) {
    nlohmann::ordered_json j;
    j["time"] = r.time;
    j["kind"] = std::string(to_string(r.kind));
    j["sender"] = opt(r.sender);
    j["recipient"] = opt(r.recipient);
    j["round"] = opt(r.round);
    j["digest"] = r.digest;
    j["note"] = r.note;
    return j.dump();
}

TraceRecord trace_record_from_json_line(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    TraceRecord r;
    r.time = j.at("time").get<SimTime>();
    auto kind = trace_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown trace kind in: " + line);
    r.kind = *kind;
    if (!j.at("sender").is_null()) r.sender = j["sender"].get<std::uint32_t>();
    if (!j.at("recipient").is_null()) r.recipient = j["recipient"].get<std::uint32_t>();
    if (!j.at("round").is_null()) r.round = j["round"].get<Round>();
    r.digest = j.at("digest").get<std::string>();
    r.note = j.at("note").get<std::string>();
    return r;
}

std::optional<std::string> note_field(std::string_view note, std::string_view key) {
    std::size_t pos = 0;
    while (pos < note.size()) {
        auto end = note.find(' ', pos);
        if (end == std::string_view::npos) end = note.size();
        auto token = note.substr(pos, end - pos);
        auto eq = token.find('=');
        if (eq != std::string_view::npos && token.substr(0, eq) == key) {
            return std::string(token.substr(eq + 1));
        }
        pos = end + 1;
    }
    return std::nullopt;
}

void Trace::write_jsonl(std::ostream& os) const {
    for (const auto& r : records_) os << to_json_line(r) << '\n';
}

Trace Trace::read_jsonl(std::istream& is) {
    Trace t;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        t.add(trace_record_from_json_line(line));
    }
    return t;
}

}  // namespace bullshark
