#include "bullshark/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace bullshark {

namespace {

std::uint64_t note_number(const TraceRecord& r, std::string_view key) {
    auto v = note_field(r.note, key);
    return v ? std::stoull(*v) : 0;
}

bool contains(const std::vector<std::uint32_t>& v, std::uint32_t x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

CheckResult pass(std::string name) { return CheckResult{std::move(name), true, ""}; }

CheckResult fail(std::string name, std::string detail) {
    return CheckResult{std::move(name), false, std::move(detail)};
}

std::vector<std::uint32_t> values(const std::vector<PartyId>& ps) {
    std::vector<std::uint32_t> out;
    for (auto p : ps) out.push_back(p.value);
    return out;
}

struct TraceScenario {
    std::uint32_t n = 0;
    std::uint32_t f = 0;
    NetworkMode mode;
    bool gc = false;
    std::vector<std::uint32_t> faulty;
};

TraceScenario scenario_from_trace(const Trace& trace) {
    TraceScenario s;
    for (const auto& r : trace.records()) {
        if (r.kind != TraceKind::scenario) continue;
        s.n = static_cast<std::uint32_t>(note_number(r, "n"));
        s.f = static_cast<std::uint32_t>(note_number(r, "f"));
        s.mode.variant = network_variant_from_string(note_field(r.note, "mode").value_or("async"))
                             .value_or(NetworkVariant::asynchronous);
        s.mode.gst = note_number(r, "gst");
        s.mode.delta = note_number(r, "delta");
        s.gc = note_number(r, "gc") != 0;
        const auto faults = note_field(r.note, "faults").value_or("none");
        if (faults != "none") {
            for (const auto& fault : parse_faults(faults)) s.faulty.push_back(fault.party.value);
        }
        break;
    }
    return s;
}

}  // namespace

std::map<std::uint32_t, std::vector<std::string>> ordered_logs(const Trace& trace) {
    std::map<std::uint32_t, std::vector<std::string>> logs;
    for (const auto& r : trace.records()) {
        if (r.kind == TraceKind::a_deliver && r.recipient) logs[*r.recipient].push_back(r.digest);
    }
    return logs;
}

std::map<std::uint32_t, std::vector<LeaderKey>> leader_sequences(const Trace& trace) {
    std::map<std::uint32_t, std::vector<LeaderKey>> out;
    for (const auto& r : trace.records()) {
        if (r.kind != TraceKind::a_deliver || !r.recipient) continue;
        LeaderKey key{note_number(r, "leader_round"), static_cast<std::uint32_t>(note_number(r, "leader_source"))};
        auto& seq = out[*r.recipient];
        if (seq.empty() || seq.back() != key) seq.push_back(key);
    }
    return out;
}

CheckResult check_total_order(const std::map<std::uint32_t, std::vector<std::string>>& logs, bool require_equal) {
    const std::string name = "total_order";
    for (auto a = logs.begin(); a != logs.end(); ++a) {
        for (auto b = std::next(a); b != logs.end(); ++b) {
            const auto& x = a->second;
            const auto& y = b->second;
            const std::size_t common = std::min(x.size(), y.size());
            for (std::size_t i = 0; i < common; ++i) {
                if (x[i] != y[i]) {
                    std::ostringstream os;
                    os << "parties " << a->first << " and " << b->first << " diverge at index " << i;
                    return fail(name, os.str());
                }
            }
            if (require_equal && x.size() != y.size()) {
                std::ostringstream os;
                os << "parties " << a->first << " and " << b->first << " end with " << x.size() << " and "
                   << y.size() << " entries (diverge at index " << common << ")";
                return fail(name, os.str());
            }
        }
    }
    return pass(name);
}

CheckResult check_wave_exclusivity(const Trace& trace) {
    const std::string name = "wave_exclusivity";
    std::map<Wave, std::set<std::string>> kinds;
    for (const auto& r : trace.records()) {
        if (r.kind != TraceKind::commit && r.kind != TraceKind::indirect_commit) continue;
        const auto kind = note_field(r.note, "kind").value_or("");
        kinds[note_number(r, "wave")].insert(kind == "fallback" ? "fallback" : "steady");
    }
    for (const auto& [w, ks] : kinds) {
        if (ks.size() > 1) return fail(name, "wave " + std::to_string(w) + " has steady and fallback commits");
    }
    return pass(name);
}

CheckResult check_leader_agreement(const std::map<std::uint32_t, std::vector<LeaderKey>>& sequences,
                                   bool require_equal) {
    const std::string name = "leader_agreement";
    for (auto a = sequences.begin(); a != sequences.end(); ++a) {
        for (auto b = std::next(a); b != sequences.end(); ++b) {
            const auto& x = a->second;
            const auto& y = b->second;
            const std::size_t common = std::min(x.size(), y.size());
            for (std::size_t i = 0; i < common; ++i) {
                if (x[i] != y[i]) {
                    std::ostringstream os;
                    os << "parties " << a->first << " and " << b->first << " disagree on leader " << i << ": round "
                       << x[i].first << " vs " << y[i].first;
                    return fail(name, os.str());
                }
            }
            if (require_equal && x.size() != y.size()) {
                std::ostringstream os;
                os << "parties " << a->first << " and " << b->first << " committed " << x.size() << " and "
                   << y.size() << " leaders";
                return fail(name, os.str());
            }
        }
    }
    return pass(name);
}

CheckResult check_vote_type_agreement(const Trace& trace, const std::vector<std::uint32_t>& honest) {
    const std::string name = "vote_type_agreement";
    std::map<std::pair<std::uint32_t, Wave>, std::pair<std::uint32_t, std::string>> seen;
    for (const auto& r : trace.records()) {
        if (r.kind != TraceKind::vote_type || !r.recipient || !r.sender) continue;
        if (!contains(honest, *r.recipient)) continue;
        const auto key = std::make_pair(*r.sender, note_number(r, "wave"));
        const auto type = note_field(r.note, "type").value_or("");
        auto [it, fresh] = seen.emplace(key, std::make_pair(*r.recipient, type));
        if (!fresh && it->second.second != type) {
            std::ostringstream os;
            os << "party " << key.first << " wave " << key.second << ": " << it->second.second << " at party "
               << it->second.first << ", " << type << " at party " << *r.recipient;
            return fail(name, os.str());
        }
    }
    return pass(name);
}

CheckResult check_gc_agreement(const Trace& trace, const std::vector<std::uint32_t>& honest) {
    const std::string name = "gc_agreement";
    std::map<std::uint32_t, std::vector<std::pair<Round, Round>>> transitions;
    for (auto p : honest) transitions[p];
    for (const auto& r : trace.records()) {
        if (r.kind != TraceKind::gc || !r.recipient || !contains(honest, *r.recipient)) continue;
        transitions[*r.recipient].emplace_back(r.round.value_or(0), note_number(r, "leader_round"));
    }
    for (auto a = transitions.begin(); a != transitions.end(); ++a) {
        for (auto b = std::next(a); b != transitions.end(); ++b) {
            if (a->second != b->second) {
                return fail(name, "parties " + std::to_string(a->first) + " and " + std::to_string(b->first) +
                                      " garbage-collected different rounds");
            }
        }
    }
    return pass(name);
}

CheckResult check_reliable_broadcast(const Trace& trace, std::uint32_t n, const std::vector<std::uint32_t>& honest,
                                     const std::vector<std::uint32_t>& crashed) {
    const std::string name = "reliable_broadcast";
    std::set<std::tuple<std::uint32_t, std::uint32_t, Round>> fired;
    std::map<std::pair<std::uint32_t, Round>, std::string> content;
    std::map<std::pair<std::uint32_t, Round>, std::set<std::uint32_t>> receivers;
    std::vector<std::pair<std::uint32_t, Round>> honest_broadcasts;
    for (const auto& r : trace.records()) {
        if (r.kind == TraceKind::broadcast && r.sender && contains(honest, *r.sender)) {
            honest_broadcasts.emplace_back(*r.sender, r.round.value_or(0));
        }
        if (r.kind != TraceKind::deliver || !r.sender || !r.recipient) continue;
        const auto round = r.round.value_or(0);
        if (!fired.emplace(*r.recipient, *r.sender, round).second) {
            return fail(name, "integrity: repeated delivery to " + std::to_string(*r.recipient));
        }
        auto [it, fresh] = content.emplace(std::make_pair(*r.sender, round), r.digest);
        if (!fresh && it->second != r.digest) {
            return fail(name, "agreement: two contents for party " + std::to_string(*r.sender) + " round " +
                                  std::to_string(round));
        }
        receivers[{*r.sender, round}].insert(*r.recipient);
    }
    for (const auto& [sender, round] : honest_broadcasts) {
        for (std::uint32_t p = 0; p < n; ++p) {
            if (p == sender || !contains(honest, p) || contains(crashed, p)) continue;
            if (!receivers[{sender, round}].contains(p)) {
                return fail(name, "validity: party " + std::to_string(p) + " never delivered party " +
                                      std::to_string(sender) + " round " + std::to_string(round));
            }
        }
    }
    return pass(name);
}

CheckResult check_single_broadcast(const Trace& trace) {
    const std::string name = "single_broadcast";
    std::set<std::pair<std::uint32_t, Round>> seen;
    for (const auto& r : trace.records()) {
        if (r.kind != TraceKind::broadcast || !r.sender) continue;
        if (!seen.emplace(*r.sender, r.round.value_or(0)).second) {
            return fail(name, "party " + std::to_string(*r.sender) + " broadcast twice in round " +
                                  std::to_string(r.round.value_or(0)));
        }
    }
    return pass(name);
}

CheckResult check_post_gst_delivery(const Trace& trace, const NetworkMode& mode,
                                    const std::vector<std::uint32_t>& honest) {
    const std::string name = "post_gst_delivery";
    if (mode.variant != NetworkVariant::eventually_synchronous) return pass(name);
    struct Instance {
        SimTime issued = 0;
        SimTime first = std::numeric_limits<SimTime>::max();
        SimTime last = 0;
    };
    std::map<std::pair<std::uint32_t, Round>, Instance> instances;
    for (const auto& r : trace.records()) {
        if (r.kind != TraceKind::deliver || !r.sender || !contains(honest, *r.sender)) continue;
        auto& in = instances[{*r.sender, r.round.value_or(0)}];
        in.issued = note_number(r, "issued");
        in.first = std::min(in.first, r.time);
        in.last = std::max(in.last, r.time);
    }
    for (const auto& [key, in] : instances) {
        SimTime start = 0;
        if (in.issued >= mode.gst) {
            start = in.issued;
        } else if (in.first >= mode.gst) {
            start = in.first;
        } else {
            continue;
        }
        if (in.last > start + mode.delta) {
            return fail(name, "party " + std::to_string(key.first) + " round " + std::to_string(key.second) +
                                  " delivered at " + std::to_string(in.last) + ", bound " +
                                  std::to_string(start + mode.delta));
        }
    }
    return pass(name);
}

CheckResult check_common_core(const LocalDag& dag) {
    const std::string name = "common_core";
    const auto quorum = dag.committee().quorum();
    for (Wave w = 1; last_round_of(w) <= dag.highest_round(); ++w) {
        const Round first = first_round_of(w);
        if (first <= dag.gc_round()) continue;
        bool full = true;
        for (Round r = first; r <= last_round_of(w); ++r) full = full && dag.round_size(r) >= quorum;
        if (!full) continue;
        const auto last = dag.round_vertices(last_round_of(w));
        std::size_t core = 0;
        for (const auto& u : dag.round_vertices(first)) {
            std::size_t reaching = 0;
            for (const auto& v : last) {
                if (dag.strong_path(*v, *u)) ++reaching;
            }
            if (reaching >= quorum) ++core;
        }
        if (core < quorum) {
            return fail(name, "wave " + std::to_string(w) + " has a common core of " + std::to_string(core));
        }
    }
    return pass(name);
}

namespace {

struct FinalLeader {
    bool found = false;
    Round round = 0;
    std::uint32_t source = 0;
};

FinalLeader final_leader(const Simulation& sim) {
    FinalLeader best;
    for (auto p : sim.honest_parties()) {
        const auto& leaders = sim.party(p).consensus().committed_leaders();
        if (leaders.empty()) continue;
        const auto& last = leaders.back().ref;
        if (!best.found || last.round > best.round) best = FinalLeader{true, last.round, last.source.value};
    }
    return best;
}

/// Digests (with round) admitted by `creator` before it broadcast its round-`round` vertex.
std::map<std::string, Round> held_before_creation(const Trace& trace, std::uint32_t creator, Round round) {
    std::map<std::string, Round> held;
    for (const auto& r : trace.records()) {
        if (r.recipient != creator) continue;
        if (r.kind == TraceKind::broadcast && r.round == round) break;
        if (r.kind == TraceKind::admit && r.round && *r.round >= 1 && *r.round < round) held[r.digest] = *r.round;
    }
    return held;
}

std::set<std::string> delivered_by(const Simulation& sim, PartyId p) {
    std::set<std::string> out;
    for (const auto& e : sim.party(p).orderer().log()) out.insert(to_hex(e.ref.digest));
    return out;
}

}  // namespace

CheckResult check_validity(const Simulation& sim, std::optional<SimTime> after_gst) {
    const std::string name = after_gst ? "validity_after_gst" : "validity";
    const auto leader = final_leader(sim);
    if (!leader.found) return pass(name);

    auto required = held_before_creation(sim.trace(), leader.source, leader.round);
    if (after_gst) {
        std::set<std::string> eligible;
        const auto honest = values(sim.honest_parties());
        for (const auto& r : sim.trace().records()) {
            if (r.kind == TraceKind::broadcast && r.sender && contains(honest, *r.sender) && r.time >= *after_gst) {
                eligible.insert(r.digest);
            }
        }
        std::erase_if(required, [&](const auto& kv) { return !eligible.contains(kv.first); });
    }
    for (auto p : sim.honest_parties()) {
        const auto log = delivered_by(sim, p);
        for (const auto& [digest, round] : required) {
            if (!log.contains(digest)) {
                return fail(name, "party " + std::to_string(p.value) + " never delivered round " +
                                      std::to_string(round) + " vertex " + digest.substr(0, 12));
            }
        }
    }
    return pass(name);
}

CheckResult check_validity_after_gst(const Simulation& sim) {
    const std::string name = "validity_after_gst";
    const SimTime gst = sim.scenario().network.gst;
    auto proxy = check_validity(sim, gst);
    if (!proxy.passed) return proxy;

    // Vertices in rounds some honest party cleared must have been output first.
    Round cleared = 0;
    for (auto p : sim.honest_parties()) cleared = std::max(cleared, sim.party(p).dag().gc_round());
    const auto honest = values(sim.honest_parties());
    std::map<std::string, Round> required;
    for (const auto& r : sim.trace().records()) {
        if (r.kind == TraceKind::broadcast && r.sender && contains(honest, *r.sender) && r.time >= gst &&
            r.round.value_or(0) <= cleared) {
            required[r.digest] = r.round.value_or(0);
        }
    }
    for (auto p : sim.honest_parties()) {
        const auto log = delivered_by(sim, p);
        for (const auto& [digest, round] : required) {
            if (!log.contains(digest)) {
                return fail(name, "party " + std::to_string(p.value) + " cleared round " + std::to_string(round) +
                                      " without delivering vertex " + digest.substr(0, 12));
            }
        }
    }
    return pass(name);
}

CommitLatency measure_commit_latency(const Trace& trace, const std::vector<std::uint32_t>& parties) {
    CommitLatency out;
    for (const auto& r : trace.records()) {
        if (r.kind != TraceKind::commit || !r.recipient || !contains(parties, *r.recipient)) continue;
        out.direct_commit_rounds[*r.recipient].push_back(r.round.value_or(0));
    }
    std::size_t count = 0;
    Round total = 0;
    for (const auto& [p, rounds] : out.direct_commit_rounds) {
        for (std::size_t i = 1; i < rounds.size(); ++i) {
            const Round gap = rounds[i] - rounds[i - 1];
            ++out.gap_histogram[gap];
            total += gap;
            ++count;
            out.max_gap = std::max(out.max_gap, gap);
        }
    }
    if (count > 0) out.mean_gap = static_cast<double>(total) / static_cast<double>(count);
    return out;
}

std::size_t gc_retention_bound(const Scenario& s, Round max_commit_gap) {
    const SimTime three_delta = 3 * s.network.delta;
    const std::size_t rounds_per_3delta = (three_delta + s.policy.min_delay - 1) / s.policy.min_delay;
    return rounds_per_3delta + 2 + max_commit_gap + 3;
}

CheckResult check_gc_bound(const Simulation& sim, Round max_commit_gap) {
    const std::string name = "gc_bound";
    if (!sim.scenario().gc_enabled) return pass(name);
    const auto bound = gc_retention_bound(sim.scenario(), max_commit_gap);
    const auto seen = sim.max_retained_rounds_after_gst();
    if (seen > bound) {
        return fail(name, "retained " + std::to_string(seen) + " rounds, bound " + std::to_string(bound));
    }
    return CheckResult{name, true, "retained " + std::to_string(seen) + " <= " + std::to_string(bound)};
}

CheckResult check_commit_gaps_explained(const Simulation& sim) {
    const std::string name = "commit_gaps_explained";
    const auto& committee = sim.scenario().committee;
    auto crashed_leader = [&](Round r) {
        const Wave w = wave_of(r);
        const PartyId leader = r % 4 == 1 ? committee.first_steady_leader(w) : committee.second_steady_leader(w);
        return sim.is_crashed(leader);
    };
    const auto latency = measure_commit_latency(sim.trace(), values(sim.honest_parties()));
    for (const auto& [p, rounds] : latency.direct_commit_rounds) {
        for (std::size_t i = 1; i < rounds.size(); ++i) {
            if (rounds[i] - rounds[i - 1] <= 2) continue;
            bool explained = false;
            for (Round r = rounds[i - 1] + 2; r < rounds[i]; r += 2) explained = explained || crashed_leader(r);
            if (!explained) {
                return fail(name, "party " + std::to_string(p) + " gap " + std::to_string(rounds[i - 1]) + " -> " +
                                      std::to_string(rounds[i]) + " spans no crashed leader");
            }
        }
    }
    return pass(name);
}

std::size_t count_timeouts(const Trace& trace, const std::vector<std::uint32_t>& parties, Round below_round) {
    std::size_t n = 0;
    for (const auto& r : trace.records()) {
        if (r.kind == TraceKind::timer_expire && r.recipient && contains(parties, *r.recipient) &&
            r.round.value_or(0) < below_round) {
            ++n;
        }
    }
    return n;
}

std::vector<CheckResult> run_trace_checks(const Trace& trace) {
    const auto s = scenario_from_trace(trace);
    std::vector<std::uint32_t> honest;
    for (std::uint32_t p = 0; p < s.n; ++p) {
        if (!contains(s.faulty, p)) honest.push_back(p);
    }
    std::vector<std::uint32_t> crashed;
    for (const auto& r : trace.records()) {
        if (r.kind == TraceKind::crash && r.recipient) crashed.push_back(*r.recipient);
    }
    auto logs = ordered_logs(trace);
    std::erase_if(logs, [&](const auto& kv) { return !contains(honest, kv.first); });
    auto leaders = leader_sequences(trace);
    std::erase_if(leaders, [&](const auto& kv) { return !contains(honest, kv.first); });

    std::vector<CheckResult> out;
    out.push_back(check_total_order(logs, true));
    out.push_back(check_wave_exclusivity(trace));
    out.push_back(check_leader_agreement(leaders, true));
    out.push_back(check_vote_type_agreement(trace, honest));
    out.push_back(check_reliable_broadcast(trace, s.n, honest, crashed));
    out.push_back(check_single_broadcast(trace));
    out.push_back(check_post_gst_delivery(trace, s.mode, honest));
    if (s.gc) out.push_back(check_gc_agreement(trace, honest));
    return out;
}

std::vector<CheckResult> run_all_checks(const Simulation& sim) {
    auto out = run_trace_checks(sim.trace());
    if (!sim.error().empty()) out.insert(out.begin(), fail("run", sim.error()));
    const auto honest = sim.honest_parties();
    CheckResult core = pass("common_core");
    for (auto p : honest) {
        auto r = check_common_core(sim.party(p).dag());
        if (!r.passed) {
            core = r;
            core.detail = "party " + std::to_string(p.value) + ": " + r.detail;
            break;
        }
    }
    out.push_back(core);
    if (sim.scenario().gc_enabled) {
        if (sim.scenario().network.variant == NetworkVariant::eventually_synchronous) {
            out.push_back(check_validity_after_gst(sim));
            const auto latency = measure_commit_latency(sim.trace(), values(honest));
            out.push_back(check_gc_bound(sim, latency.max_gap));
        }
    } else {
        out.push_back(check_validity(sim, std::nullopt));
    }
    return out;
}

}  // namespace bullshark
