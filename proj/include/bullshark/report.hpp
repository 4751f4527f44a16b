// Machine-readable run report: logs, leaders, latency, retention and
// checker verdicts.

#pragma once

#include <json.hpp>

#include "bullshark/checkers.hpp"

namespace bullshark {

bool all_passed(const std::vector<CheckResult>& checks);

nlohmann::ordered_json checks_to_json(const std::vector<CheckResult>& checks);

/// Leader kinds committed in each wave (from the first honest party's
/// sequence); waves with no commit map to "none".
std::map<Wave, std::vector<std::string>> wave_outcomes(const Simulation& sim);

nlohmann::ordered_json build_report(const Simulation& sim, const std::vector<CheckResult>& checks);

}  // namespace bullshark
