#include "bullshark/replay.hpp"

#include <set>

#include "bullshark/consensus_fallback.hpp"
#include "bullshark/consensus_psync.hpp"
#include "bullshark/dag_core.hpp"
#include "bullshark/report.hpp"

namespace bullshark {

namespace {

const Committee kFour{4, 1};

std::vector<ScriptedVertex> full_round(Round r, std::vector<std::uint32_t> strong) {
    std::vector<ScriptedVertex> out;
    for (std::uint32_t p = 0; p < 4; ++p) out.push_back({r, p, strong});
    return out;
}

void append(std::vector<ScriptedVertex>& to, std::vector<ScriptedVertex> from) {
    to.insert(to.end(), from.begin(), from.end());
}

std::string leader_name(const std::map<std::pair<Round, std::uint32_t>, std::string>& names, const VertexRef& ref) {
    auto it = names.find({ref.round, ref.source.value});
    return it == names.end() ? describe(ref) : it->second;
}

const TraceRecord* find_record(const Trace& trace, TraceKind kind, Round round,
                               std::optional<std::uint32_t> sender = std::nullopt) {
    for (const auto& r : trace.records()) {
        if (r.kind == kind && r.round == round && (!sender || r.sender == sender)) return &r;
    }
    return nullptr;
}

CheckResult expect(std::string name, bool ok, std::string detail) {
    return CheckResult{std::move(name), ok, ok ? "" : std::move(detail)};
}

std::string note_or_missing(const TraceRecord* r) { return r ? r->note : "missing"; }

}  // namespace

std::vector<VertexPtr> build_scripted_dag(const Committee& committee, const std::vector<ScriptedVertex>& script) {
    LocalDag builder(committee);
    std::vector<VertexPtr> out;
    SimTime clock = 0;
    for (const auto& s : script) {
        Vertex v;
        v.round = s.round;
        v.source = PartyId{s.source};
        v.block = Block{v.source, s.round, "r" + std::to_string(s.round) + "p" + std::to_string(s.source)};
        for (auto src : s.strong) {
            auto parent = builder.get_vertex(PartyId{src}, s.round - 1);
            if (!parent) {
                throw std::invalid_argument("script references missing vertex r" + std::to_string(s.round - 1) +
                                            " p" + std::to_string(src));
            }
            v.strong_edges.push_back(parent->ref());
        }
        std::sort(v.strong_edges.begin(), v.strong_edges.end());
        set_weak_edges(builder, v, s.round);
        v.ts = clock;
        clock += 10;
        auto sealed = seal(std::move(v));
        if (builder.insert(sealed) != LocalDag::InsertResult::inserted) {
            throw std::invalid_argument("script vertex not insertable: " + describe(sealed->ref()));
        }
        out.push_back(sealed);
    }
    return out;
}

std::vector<ScriptedVertex> figure1_script() {
    // Parties 0..3 are P1..P4.
    std::vector<ScriptedVertex> s;
    append(s, full_round(1, {0, 1, 2}));
    s.push_back({2, 0, {0, 1, 2}});
    s.push_back({2, 1, {0, 1, 2}});
    s.push_back({2, 2, {0, 1, 2}});
    s.push_back({2, 3, {1, 2, 3}});
    s.push_back({3, 0, {0, 1, 2}});
    s.push_back({3, 1, {0, 1, 3}});
    s.push_back({3, 2, {1, 2, 3}});
    s.push_back({3, 3, {0, 2, 3}});
    s.push_back({4, 0, {0, 2, 3}});
    s.push_back({4, 1, {0, 1, 2}});
    s.push_back({4, 2, {0, 2, 3}});
    s.push_back({4, 3, {0, 2, 3}});
    s.push_back({5, 0, {0, 1, 2}});
    s.push_back({5, 1, {0, 1, 3}});
    s.push_back({5, 2, {0, 2, 3}});
    s.push_back({5, 3, {1, 2, 3}});
    s.push_back({6, 0, {0, 1, 2}});
    s.push_back({6, 1, {0, 1, 2}});
    s.push_back({6, 2, {0, 1, 2}});
    s.push_back({6, 3, {1, 2, 3}});
    s.push_back({7, 0, {0, 1, 3}});
    s.push_back({7, 1, {1, 2, 3}});
    s.push_back({7, 2, {0, 1, 2}});
    s.push_back({7, 3, {0, 2, 3}});
    s.push_back({8, 0, {0, 1, 2}});
    s.push_back({8, 1, {1, 2, 3}});
    s.push_back({8, 2, {0, 2, 3}});
    s.push_back({9, 0, {0, 1, 2}});
    return s;
}

std::vector<ScriptedVertex> appendix_a_script() {
    std::vector<ScriptedVertex> s;
    append(s, full_round(1, {0, 1, 2}));
    s.push_back({2, 0, {0, 1, 2}});
    s.push_back({2, 1, {1, 2, 3}});
    s.push_back({2, 2, {1, 2, 3}});
    s.push_back({2, 3, {1, 2, 3}});
    s.push_back({3, 0, {0, 1, 2}});
    s.push_back({3, 1, {1, 2, 3}});
    s.push_back({3, 2, {1, 2, 3}});
    s.push_back({3, 3, {1, 2, 3}});
    s.push_back({4, 0, {0, 2, 3}});
    s.push_back({4, 1, {0, 1, 2}});
    s.push_back({4, 2, {0, 2, 3}});
    s.push_back({4, 3, {0, 2, 3}});
    s.push_back({5, 0, {0, 1, 2}});
    s.push_back({5, 1, {0, 2, 3}});
    s.push_back({5, 2, {0, 2, 3}});
    s.push_back({5, 3, {0, 2, 3}});
    s.push_back({6, 0, {0, 2, 3}});
    s.push_back({6, 1, {0, 2, 3}});
    s.push_back({6, 2, {0, 2, 3}});
    s.push_back({6, 3, {0, 1, 3}});
    s.push_back({7, 0, {0, 1, 2}});
    return s;
}

ReplayOutcome replay_figure(std::string_view name) {
    const bool fig1 = name == "fig1";
    if (!fig1 && name != "appendixA") throw std::invalid_argument("unknown figure " + std::string(name));

    ReplayOutcome out;
    out.figure = std::string(name);
    NullEnvironment env;
    env.record(TraceRecord{0, TraceKind::scenario, std::nullopt, std::nullopt, std::nullopt, "",
                           std::string("replay=") + out.figure + " protocol=" + (fig1 ? "fallback" : "psync") +
                               " n=4 f=1 mode=async gst=0 delta=10 gc=0 faults=none"});

    const PartyId observer{0};
    LocalDag dag(kFour);
    Orderer orderer(observer, dag, env);
    ScriptedCoin coin({{1, PartyId{2}}, {2, PartyId{3}}, {3, PartyId{0}}});
    std::unique_ptr<ConsensusProtocol> consensus;
    if (fig1) {
        consensus = std::make_unique<FallbackConsensus>(observer, dag, coin, orderer, env);
    } else {
        consensus = std::make_unique<PsyncConsensus>(observer, dag, orderer, env);
    }
    DagCoreConfig config;
    config.passive = true;
    DagCore core(observer, dag, *consensus, env, config);

    for (const auto& v : build_scripted_dag(kFour, fig1 ? figure1_script() : appendix_a_script())) {
        env.clock = v->ts;
        core.on_r_deliver(v, v->round, v->source);
    }

    std::map<std::pair<Round, std::uint32_t>, std::string> names;
    if (fig1) {
        names = {{{1, 0}, "S1A"}, {{3, 1}, "S1B"}, {{5, 2}, "S2A"}, {{7, 3}, "S2B"}, {{1, 2}, "F1"}, {{5, 3}, "F2"}};
    } else {
        names = {{{1, 0}, "L1"}, {{3, 1}, "L2"}, {{5, 2}, "L3"}, {{7, 3}, "L4"}};
    }
    out.trace = env.trace;
    out.committed = consensus->committed_leaders();
    for (const auto& l : out.committed) out.committed_names.push_back(leader_name(names, l.ref));

    const Trace& t = out.trace;
    auto& checks = out.checks;
    if (fig1) {
        const auto* s1a = find_record(t, TraceKind::commit, 1, 0);
        checks.push_back(expect("S1A directly committed with 3 steady votes",
                                s1a && note_field(s1a->note, "votes") == "3" &&
                                    note_field(s1a->note, "kind") == "steady1",
                                note_or_missing(s1a)));
        const bool s1b_committed =
            find_record(t, TraceKind::commit, 3) || find_record(t, TraceKind::indirect_commit, 3);
        checks.push_back(expect("S1B not committed", !s1b_committed, "S1B was committed"));
        const auto* ledger = &static_cast<const FallbackConsensus&>(*consensus).ledger();
        checks.push_back(expect("all parties fallback-typed in wave 2",
                                ledger->fallback_voters(2).size() == 4 && ledger->steady_voters(2).empty(),
                                std::to_string(ledger->fallback_voters(2).size()) + " fallback voters"));
        const auto* f2 = find_record(t, TraceKind::commit, 5, 3);
        checks.push_back(expect("F2 directly committed with 3 fallback votes",
                                f2 && note_field(f2->note, "votes") == "3" &&
                                    note_field(f2->note, "kind") == "fallback",
                                note_or_missing(f2)));
        const auto* skip = find_record(t, TraceKind::skip, 3);
        checks.push_back(expect("S1B skipped in the backward walk with 1 vote",
                                skip && note_field(skip->note, "ss") == "1", note_or_missing(skip)));
        const std::vector<std::string> want{"S1A", "F2"};
        checks.push_back(expect("committed leaders are [S1A, F2]", out.committed_names == want,
                                "got " + std::to_string(out.committed_names.size()) + " leaders"));
    } else {
        const auto* l3 = find_record(t, TraceKind::commit, 5, 2);
        checks.push_back(expect("L3 directly committed with 3 votes",
                                l3 && note_field(l3->note, "votes") == "3", note_or_missing(l3)));
        const bool l1_direct = find_record(t, TraceKind::commit, 1) != nullptr;
        const bool l2_direct = find_record(t, TraceKind::commit, 3) != nullptr;
        checks.push_back(expect("L1 and L2 not directly committed", !l1_direct && !l2_direct,
                                "a first-wave leader was directly committed"));
        const auto* skip = find_record(t, TraceKind::skip, 3);
        checks.push_back(expect("L2 skipped (no strong path from L3)", skip != nullptr && !dag.strong_path(
                                                                             *dag.get_vertex(PartyId{2}, 5),
                                                                             *dag.get_vertex(PartyId{1}, 3)),
                                "L2 not skipped"));
        const std::vector<std::string> want{"L1", "L3"};
        checks.push_back(expect("L1 ordered before L3", out.committed_names == want,
                                "got " + std::to_string(out.committed_names.size()) + " leaders"));
    }
    checks.push_back(check_wave_exclusivity(t));
    out.passed = all_passed(checks);
    return out;
}

nlohmann::ordered_json replay_report(const ReplayOutcome& outcome) {
    nlohmann::ordered_json j;
    j["figure"] = outcome.figure;
    j["passed"] = outcome.passed;
    auto leaders = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < outcome.committed.size(); ++i) {
        const auto& l = outcome.committed[i];
        leaders.push_back({{"name", outcome.committed_names[i]},
                           {"round", l.ref.round},
                           {"source", l.ref.source.value},
                           {"kind", to_string(l.kind)},
                           {"direct", l.direct},
                           {"votes", l.votes}});
    }
    j["committed_leaders"] = leaders;
    j["checks"] = checks_to_json(outcome.checks);
    return j;
}

}  // namespace bullshark
