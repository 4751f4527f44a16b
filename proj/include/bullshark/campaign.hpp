// Seed sweeps over a base scenario, and the TOML-style config loader.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bullshark/checkers.hpp"

namespace bullshark {

struct CampaignConfig {
    Scenario base;
    /// When non-empty, seed s runs with n = n_values[s mod size] (f = (n-1)/3).
    std::vector<std::uint32_t> n_values;
    /// When non-empty, seed s uses policies[(s / n_values.size()) mod size].
    std::vector<PolicyKind> policies;
    /// Crash a seed-chosen set of up to f parties at seed-chosen times.
    bool random_crashes = false;
};

/// Reads `[scenario]`, `[policy]` and `[campaign]` sections. Unknown keys
/// are rejected.
CampaignConfig load_campaign_config(const std::string& path);
CampaignConfig parse_campaign_config(std::istream& in);

Scenario campaign_scenario(const CampaignConfig& config, std::uint64_t seed);

struct CampaignRun {
    Scenario scenario;
    std::vector<CheckResult> checks;
    bool passed = false;
};

struct CampaignSummary {
    std::size_t runs = 0;
    std::size_t failed = 0;
    std::map<std::string, std::size_t> failures_by_check;
    std::vector<CampaignRun> failures;
};

using CampaignVisitor = std::function<void(const Simulation&, const CampaignRun&)>;

CampaignSummary run_campaign(const CampaignConfig& config, std::uint64_t first_seed, std::uint64_t seeds,
                             const CampaignVisitor& visit = {});

}  // namespace bullshark
