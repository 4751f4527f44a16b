// Scripted four-party DAGs replayed through a single observer party, with
// the expected commit and skip decisions.

#pragma once

#include <json.hpp>

#include "bullshark/checkers.hpp"
#include "bullshark/consensus.hpp"

namespace bullshark {

/// A vertex of a scripted DAG: strong edges name the sources of round-1
/// vertices. Weak edges are filled in against the vertices scripted so far.
struct ScriptedVertex {
    Round round = 0;
    std::uint32_t source = 0;
    std::vector<std::uint32_t> strong;
};

std::vector<VertexPtr> build_scripted_dag(const Committee& committee, const std::vector<ScriptedVertex>& script);

std::vector<ScriptedVertex> figure1_script();
std::vector<ScriptedVertex> appendix_a_script();

struct ReplayOutcome {
    std::string figure;
    Trace trace;
    std::vector<CommittedLeader> committed;
    std::vector<std::string> committed_names;
    std::vector<CheckResult> checks;
    bool passed = false;
};

/// `name` is "fig1" or "appendixA". Throws std::invalid_argument otherwise.
ReplayOutcome replay_figure(std::string_view name);

nlohmann::ordered_json replay_report(const ReplayOutcome& outcome);

}  // namespace bullshark
