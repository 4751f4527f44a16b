// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned
// below. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bullshark/campaign.hpp"
#include "bullshark/replay.hpp"

using namespace bullshark;

namespace {

// Pinned tolerances.
constexpr std::uint64_t kFuzzSeeds = 500;
constexpr double kFuzzBudgetSeconds = 600.0;
constexpr std::size_t kMinFallbackWaves = 1000;
constexpr double kFallbackCommitTarget = 0.66;
constexpr double kSigmas = 3.0;
constexpr double kMaxRoundsPerCommit = 6.0;
constexpr double kFallbackBudgetSeconds = 300.0;
constexpr std::uint64_t kCoinWaves = 10000;
constexpr double kChiSquare99Df3 = 11.345;
constexpr Round kPsyncSteadyGap = 2;

struct Outcome {
    bool passed = true;
    std::string detail;
};

std::vector<std::uint32_t> ids(const std::vector<PartyId>& parties) {
    std::vector<std::uint32_t> out;
    for (auto p : parties) out.push_back(p.value);
    return out;
}

template <typename M>
M restrict_to(const M& per_party, const std::vector<std::uint32_t>& keep) {
    M out;
    for (auto p : keep) {
        if (auto it = per_party.find(p); it != per_party.end()) out.emplace(p, it->second);
    }
    return out;
}

/// Safety properties every fuzzed run must satisfy: all parties are prefix
/// consistent, and honest parties finish with identical logs.
Outcome safety_of(const Simulation& sim) {
    const auto honest = ids(sim.honest_parties());
    const auto logs = ordered_logs(sim.trace());
    const auto leaders = leader_sequences(sim.trace());
    for (const auto& c : {check_total_order(logs, false), check_total_order(restrict_to(logs, honest), true),
                          check_wave_exclusivity(sim.trace()), check_leader_agreement(leaders, false),
                          check_leader_agreement(restrict_to(leaders, honest), true)}) {
        if (!c.passed) return {false, c.name + ": " + c.detail};
    }
    return {};
}

/// Shared fuzz campaign (criteria 1, 6 and 7 read its runs).
struct FuzzResults {
    std::map<Protocol, std::size_t> runs;
    std::map<Protocol, std::size_t> crashed_runs;
    std::vector<std::string> safety_failures;
    std::vector<std::string> vote_type_failures;
    std::vector<std::string> common_core_failures;
    std::size_t vote_types_compared = 0;
    std::size_t common_core_dags = 0;
    double seconds = 0.0;
};

FuzzResults run_fuzz() {
    FuzzResults out;
    const auto start = std::chrono::steady_clock::now();
    for (auto protocol : {Protocol::fallback, Protocol::psync}) {
        CampaignConfig config;
        config.base.protocol = protocol;
        config.base.max_rounds = 40;
        config.n_values = {4, 7, 10};
        config.policies = {PolicyKind::uniform, PolicyKind::leader_starve};
        config.random_crashes = true;
        out.runs[protocol] = 0;
        out.crashed_runs[protocol] = 0;
        run_campaign(config, 0, kFuzzSeeds, [&](const Simulation& sim, const CampaignRun& run) {
            const std::string tag = std::string(to_string(protocol)) + " seed " + std::to_string(run.scenario.seed);
            ++out.runs[protocol];
            if (!run.scenario.faults.empty()) ++out.crashed_runs[protocol];
            if (!sim.error().empty()) out.safety_failures.push_back(tag + ": " + sim.error());
            if (auto s = safety_of(sim); !s.passed) out.safety_failures.push_back(tag + ": " + s.detail);

            const auto honest = ids(sim.honest_parties());
            if (protocol == Protocol::fallback) {
                const auto c = check_vote_type_agreement(sim.trace(), honest);
                if (!c.passed) out.vote_type_failures.push_back(tag + ": " + c.detail);
                for (const auto& r : sim.trace().records()) out.vote_types_compared += r.kind == TraceKind::vote_type;
            }
            for (auto p : sim.honest_parties()) {
                const auto c = check_common_core(sim.party(p).dag());
                ++out.common_core_dags;
                if (!c.passed) out.common_core_failures.push_back(tag + " party " + std::to_string(p.value) + ": " + c.detail);
            }
        });
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string first_of(const std::vector<std::string>& v) { return v.empty() ? "" : " first: " + v.front(); }

Outcome criterion_safety_fuzz(const FuzzResults& fuzz) {
    std::ostringstream d;
    d << "runs fallback=" << fuzz.runs.at(Protocol::fallback) << " psync=" << fuzz.runs.at(Protocol::psync)
      << " with_crashes=" << fuzz.crashed_runs.at(Protocol::fallback) + fuzz.crashed_runs.at(Protocol::psync)
      << " violations=" << fuzz.safety_failures.size() << " seconds=" << fuzz.seconds << first_of(fuzz.safety_failures);
    const bool ok = fuzz.safety_failures.empty() && fuzz.runs.at(Protocol::fallback) == kFuzzSeeds &&
                    fuzz.runs.at(Protocol::psync) == kFuzzSeeds && fuzz.seconds < kFuzzBudgetSeconds;
    return {ok, d.str()};
}

Outcome criterion_replay(std::string_view figure) {
    const auto out = replay_figure(figure);
    std::ostringstream d;
    d << "committed=[";
    for (std::size_t i = 0; i < out.committed_names.size(); ++i) d << (i ? "," : "") << out.committed_names[i];
    d << "]";
    for (const auto& c : out.checks) {
        if (!c.passed) d << " failed: " << c.name;
    }
    d << " decisions_checked=" << out.checks.size();
    return {out.passed, d.str()};
}

Outcome criterion_psync_cadence() {
    Scenario s;
    s.protocol = Protocol::psync;
    s.network = NetworkMode{NetworkVariant::eventually_synchronous, 0, 10};
    s.timeout_ticks = 5 * s.network.delta;
    s.max_rounds = 100;
    Simulation sim(s);
    if (!sim.run()) return {false, "run aborted: " + sim.error()};
    const auto honest = ids(sim.honest_parties());
    const auto latency = measure_commit_latency(sim.trace(), honest);
    std::size_t gaps = 0;
    std::size_t off_cadence = 0;
    for (const auto& [p, rounds] : latency.direct_commit_rounds) {
        for (std::size_t i = 1; i < rounds.size(); ++i) {
            if (rounds[i - 1] < last_round_of(1)) continue;  // first wave warms up
            ++gaps;
            off_cadence += rounds[i] - rounds[i - 1] != kPsyncSteadyGap;
        }
    }
    const auto timeouts = count_timeouts(sim.trace(), honest, s.max_rounds);
    const auto safety = safety_of(sim);
    std::ostringstream d;
    d << "gaps=" << gaps << " off_cadence=" << off_cadence << " timeouts=" << timeouts
      << " mean_gap=" << latency.mean_gap << (safety.passed ? "" : " " + safety.detail);
    return {gaps > 0 && off_cadence == 0 && timeouts == 0 && safety.passed, d.str()};
}

Outcome fallback_liveness(SimTime starve_delay) {
    const auto start = std::chrono::steady_clock::now();
    std::size_t waves = 0;
    std::size_t committed = 0;
    std::size_t runs = 0;
    double gap_sum = 0.0;
    std::vector<std::string> failures;
    for (std::uint64_t seed = 0; waves < kMinFallbackWaves && seed < 1000; ++seed) {
        Scenario s;
        s.protocol = Protocol::fallback;
        s.policy.kind = PolicyKind::leader_starve;
        s.policy.starve_delay = starve_delay;
        s.max_rounds = 200;
        s.seed = seed;
        Simulation sim(s);
        ++runs;
        if (!sim.run()) {
            failures.push_back("seed " + std::to_string(seed) + ": " + sim.error());
            continue;
        }
        if (auto safety = safety_of(sim); !safety.passed) failures.push_back("seed " + std::to_string(seed) + ": " + safety.detail);
        gap_sum += measure_commit_latency(sim.trace(), ids(sim.honest_parties())).mean_gap;
        const auto& observer = sim.party(PartyId{0});
        const auto* ledger = observer.ledger();
        std::map<Wave, bool> fallback_committed;
        for (const auto& l : observer.consensus().committed_leaders()) {
            if (l.kind == LeaderKind::fallback) fallback_committed[l.wave] = true;
        }
        for (Wave w : ledger->waves()) {
            // The decision needs round 4w+1 votes; later waves are cut off by the horizon.
            if (last_round_of(w) + 1 > s.max_rounds) continue;
            if (ledger->fallback_voters(w).size() != s.committee.n) continue;
            ++waves;
            committed += fallback_committed[w];
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double fraction = waves ? static_cast<double>(committed) / static_cast<double>(waves) : 0.0;
    const double margin =
        waves ? kSigmas * std::sqrt(kFallbackCommitTarget * (1 - kFallbackCommitTarget) / static_cast<double>(waves)) : 1.0;
    const double rounds_per_commit = committed ? 4.0 * static_cast<double>(waves) / static_cast<double>(committed) : 1e9;
    std::ostringstream d;
    d << "starve_delay=" << starve_delay << " runs=" << runs << " all_fallback_waves=" << waves << " committed=" << committed << " fraction=" << fraction
      << " floor=" << kFallbackCommitTarget - margin << " rounds_per_commit=" << rounds_per_commit
      << " end_to_end_mean_gap=" << gap_sum / static_cast<double>(runs) << " seconds=" << seconds
      << first_of(failures);
    const bool ok = failures.empty() && waves >= kMinFallbackWaves && fraction >= kFallbackCommitTarget - margin &&
                    rounds_per_commit <= kMaxRoundsPerCommit && seconds < kFallbackBudgetSeconds;
    return {ok, d.str()};
}

Outcome criterion_fallback_liveness() { return fallback_liveness(PolicyConfig{}.starve_delay); }

Outcome criterion_vote_types(const FuzzResults& fuzz) {
    std::ostringstream d;
    d << "vote_type_records=" << fuzz.vote_types_compared << " violations=" << fuzz.vote_type_failures.size()
      << first_of(fuzz.vote_type_failures);
    return {fuzz.vote_type_failures.empty() && fuzz.vote_types_compared > 0, d.str()};
}

Outcome criterion_common_core(const FuzzResults& fuzz) {
    std::ostringstream d;
    d << "dags=" << fuzz.common_core_dags << " violations=" << fuzz.common_core_failures.size()
      << first_of(fuzz.common_core_failures);
    return {fuzz.common_core_failures.empty() && fuzz.common_core_dags > 0, d.str()};
}

Outcome criterion_gc() {
    std::size_t runs = 0;
    std::size_t transitions = 0;
    std::size_t worst_retained = 0;
    std::size_t worst_bound = 0;
    std::vector<std::string> failures;
    for (auto protocol : {Protocol::psync, Protocol::fallback}) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Scenario s;
            s.protocol = protocol;
            s.seed = seed;
            s.max_rounds = 80;
            s.gc_enabled = true;
            // GST lands near round 40: roughly 10 ticks per round before it.
            s.network = NetworkMode{NetworkVariant::eventually_synchronous, 400, 10};
            s.timeout_ticks = 5 * s.network.delta;
            s.policy.kind = seed % 2 ? PolicyKind::leader_starve : PolicyKind::uniform;
            Simulation sim(s);
            ++runs;
            const std::string tag = std::string(to_string(protocol)) + " seed " + std::to_string(seed);
            if (!sim.run()) {
                failures.push_back(tag + ": " + sim.error());
                continue;
            }
            const auto honest = ids(sim.honest_parties());
            const auto latency = measure_commit_latency(sim.trace(), honest);
            for (const auto& c : {check_validity_after_gst(sim), check_gc_bound(sim, latency.max_gap),
                                  check_gc_agreement(sim.trace(), honest), safety_of(sim).passed
                                      ? CheckResult{"safety", true, ""}
                                      : CheckResult{"safety", false, safety_of(sim).detail}}) {
                if (!c.passed) failures.push_back(tag + " " + c.name + ": " + c.detail);
            }
            for (auto p : sim.honest_parties()) transitions += sim.party(p).orderer().gc_transitions().size();
            if (sim.max_retained_rounds_after_gst() > worst_retained) {
                worst_retained = sim.max_retained_rounds_after_gst();
                worst_bound = gc_retention_bound(s, latency.max_gap);
            }
        }
    }
    std::ostringstream d;
    d << "runs=" << runs << " gc_transitions=" << transitions << " worst_retained=" << worst_retained
      << " its_bound=" << worst_bound << " violations=" << failures.size() << first_of(failures);
    return {failures.empty() && transitions > 0, d.str()};
}

Outcome criterion_coin() {
    const Committee c{4, 1};
    std::ostringstream d;
    bool ok = true;
    for (std::uint64_t seed : {0u, 7u}) {
        SeededCoin coin(seed, c);
        std::vector<double> counts(c.n, 0.0);
        for (Wave w = 1; w <= kCoinWaves; ++w) counts[coin.choose_leader(w).value] += 1.0;
        const double expected = static_cast<double>(kCoinWaves) / c.n;
        double chi2 = 0.0;
        for (double k : counts) chi2 += (k - expected) * (k - expected) / expected;
        ok = ok && chi2 < kChiSquare99Df3;
        d << "seed " << seed << " chi2=" << chi2 << " ";
    }
    d << "threshold=" << kChiSquare99Df3;
    return {ok, d.str()};
}

Outcome criterion_crash_resilience() {
    struct Case {
        Committee committee;
        std::string faults;
    };
    const std::vector<Case> cases{{{4, 1}, "3:crash@0"},        {{7, 2}, "5:crash@0"},
                                  {{7, 2}, "2:crash@0,5:crash@0"}, {{4, 1}, "1:crash@150"},
                                  {{7, 2}, "0:crash@100,3:crash@250"}};
    std::size_t runs = 0;
    Round widest_gap = 0;
    std::vector<std::string> failures;
    for (const auto& k : cases) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Scenario s;
            s.protocol = Protocol::psync;
            s.committee = k.committee;
            s.network = NetworkMode{NetworkVariant::eventually_synchronous, 0, 10};
            s.timeout_ticks = 5 * s.network.delta;
            s.max_rounds = 60;
            s.seed = seed;
            s.faults = parse_faults(k.faults);
            Simulation sim(s);
            ++runs;
            const std::string tag = "n=" + std::to_string(k.committee.n) + " " + k.faults + " seed " + std::to_string(seed);
            if (!sim.run()) {
                failures.push_back(tag + ": " + sim.error());
                continue;
            }
            if (auto safety = safety_of(sim); !safety.passed) failures.push_back(tag + ": " + safety.detail);
            if (auto gaps = check_commit_gaps_explained(sim); !gaps.passed) failures.push_back(tag + ": " + gaps.detail);
            const auto latency = measure_commit_latency(sim.trace(), ids(sim.honest_parties()));
            widest_gap = std::max(widest_gap, latency.max_gap);
            // Live: every honest party keeps committing into the last waves.
            for (auto p : sim.honest_parties()) {
                const auto it = latency.direct_commit_rounds.find(p.value);
                const Round last = it == latency.direct_commit_rounds.end() || it->second.empty() ? 0 : it->second.back();
                if (last + 8 < s.max_rounds) {
                    failures.push_back(tag + ": party " + std::to_string(p.value) + " last commit at round " +
                                       std::to_string(last));
                }
            }
        }
    }
    std::ostringstream d;
    d << "runs=" << runs << " widest_gap=" << widest_gap << " violations=" << failures.size() << first_of(failures);
    return {failures.empty(), d.str()};
}

}  // namespace

int main() {
    int failed = 0;
    auto report = [&](const char* id, const char* name, const Outcome& o) {
        std::printf("%s %s %s: %s\n", o.passed ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.passed;
    };
    const auto fuzz = run_fuzz();
    report("C1", "safety_fuzz", criterion_safety_fuzz(fuzz));
    report("C2", "fallback_replay", criterion_replay("fig1"));
    report("C3", "psync_replay", criterion_replay("appendixA"));
    report("C4", "psync_cadence", criterion_psync_cadence());
    report("C5", "fallback_liveness", criterion_fallback_liveness());
    report("C6", "vote_type_agreement", criterion_vote_types(fuzz));
    report("C7", "common_core", criterion_common_core(fuzz));
    report("C8", "gc_fairness_and_bound", criterion_gc());
    report("C9", "coin_fairness", criterion_coin());
    report("C10", "crash_resilience", criterion_crash_resilience());
    std::printf("%s: %d of 10 criteria failed\n", failed ? "FAIL" : "PASS", failed);
    return failed;
}
