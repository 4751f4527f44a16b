#include "bullshark/report.hpp"

#include <algorithm>

namespace bullshark {

bool all_passed(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::ordered_json checks_to_json(const std::vector<CheckResult>& checks) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        out.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return out;
}

std::map<Wave, std::vector<std::string>> wave_outcomes(const Simulation& sim) {
    std::map<Wave, std::vector<std::string>> out;
    for (Wave w = 1; last_round_of(w) <= sim.scenario().max_rounds; ++w) out[w];
    const auto honest = sim.honest_parties();
    if (honest.empty()) return out;
    for (const auto& l : sim.party(honest.front()).consensus().committed_leaders()) {
        out[l.wave].emplace_back(to_string(l.kind));
    }
    for (auto& [w, kinds] : out) {
        if (kinds.empty()) kinds.emplace_back("none");
    }
    return out;
}

nlohmann::ordered_json build_report(const Simulation& sim, const std::vector<CheckResult>& checks) {
    nlohmann::ordered_json j;
    const auto& s = sim.scenario();
    j["scenario"] = {
        {"protocol", to_string(s.protocol)},
        {"n", s.committee.n},
        {"f", s.committee.f},
        {"mode", to_string(s.network.variant)},
        {"gst", s.network.gst},
        {"delta", s.network.delta},
        {"timeout", s.timeout_ticks},
        {"seed", s.seed},
        {"rounds", s.max_rounds},
        {"policy", to_string(s.policy.kind)},
        {"gc", s.gc_enabled},
        {"faults", format_faults(s.faults)},
    };
    j["passed"] = all_passed(checks);
    j["error"] = sim.error();
    j["events"] = sim.events_fired();
    j["final_time"] = sim.now();

    auto parties = nlohmann::ordered_json::array();
    for (std::uint32_t i = 0; i < sim.party_count(); ++i) {
        const PartyId p{i};
        const auto& party = sim.party(p);
        std::vector<std::uint8_t> bytes;
        for (const auto& e : party.orderer().log()) bytes.insert(bytes.end(), e.ref.digest.begin(), e.ref.digest.end());
        parties.push_back({
            {"party", i},
            {"honest", !sim.is_faulty(p)},
            {"crashed", sim.is_crashed(p)},
            {"round", party.core().round()},
            {"log_length", party.orderer().log().size()},
            {"log_digest", to_hex(sha256(bytes))},
            {"committed_leaders", party.consensus().committed_leaders().size()},
            {"gc_round", party.dag().gc_round()},
            {"buffered", party.core().buffer_size()},
        });
    }
    j["parties"] = parties;

    auto leaders = nlohmann::ordered_json::array();
    const auto honest = sim.honest_parties();
    if (!honest.empty()) {
        for (const auto& l : sim.party(honest.front()).consensus().committed_leaders()) {
            leaders.push_back({{"round", l.ref.round},
                               {"source", l.ref.source.value},
                               {"wave", l.wave},
                               {"kind", to_string(l.kind)},
                               {"direct", l.direct}});
        }
    }
    j["committed_leaders"] = leaders;

    std::vector<std::uint32_t> honest_ids;
    for (auto p : honest) honest_ids.push_back(p.value);
    const auto latency = measure_commit_latency(sim.trace(), honest_ids);
    nlohmann::ordered_json histogram = nlohmann::ordered_json::object();
    for (const auto& [gap, count] : latency.gap_histogram) histogram[std::to_string(gap)] = count;
    j["commit_latency"] = {{"mean_gap_rounds", latency.mean_gap}, {"max_gap_rounds", latency.max_gap},
                           {"histogram", histogram}};

    nlohmann::ordered_json waves = nlohmann::ordered_json::object();
    for (const auto& [w, kinds] : wave_outcomes(sim)) waves[std::to_string(w)] = kinds;
    j["wave_outcomes"] = waves;
    j["max_retained_rounds"] = sim.max_retained_rounds();
    j["max_retained_rounds_after_gst"] = sim.max_retained_rounds_after_gst();
    j["checks"] = checks_to_json(checks);
    return j;
}

}  // namespace bullshark
