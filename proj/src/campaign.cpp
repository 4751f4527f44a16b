#include "bullshark/campaign.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace bullshark {

namespace {

namespace pt = boost::property_tree;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::string strip_quotes(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

template <typename T>
T get(const pt::ptree& section, const std::string& key, T fallback) {
    return section.get<T>(key, fallback);
}

void reject_unknown(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : section) {
        if (!allowed.contains(key)) throw std::invalid_argument("unknown key " + name + "." + key);
    }
}

}  // namespace

CampaignConfig parse_campaign_config(std::istream& in) {
    pt::ptree tree;
    pt::read_ini(in, tree);
    for (const auto& [name, _] : tree) {
        if (name != "scenario" && name != "policy" && name != "campaign") {
            throw std::invalid_argument("unknown section " + name);
        }
    }
    CampaignConfig c;
    Scenario& s = c.base;

    const auto scenario = tree.get_child("scenario", pt::ptree{});
    reject_unknown(scenario, "scenario",
                   {"protocol", "n", "f", "mode", "gst", "delta", "timeout", "rounds", "gc", "faults", "tx_rate"});
    const auto protocol = strip_quotes(get<std::string>(scenario, "protocol", "fallback"));
    s.protocol = protocol_from_string(protocol).value_or(Protocol::fallback);
    if (!protocol_from_string(protocol)) throw std::invalid_argument("unknown protocol " + protocol);
    const auto f = get<std::uint32_t>(scenario, "f", 1);
    s.committee = Committee(get<std::uint32_t>(scenario, "n", 3 * f + 1), f);
    const auto mode = strip_quotes(get<std::string>(scenario, "mode", "async"));
    if (!network_variant_from_string(mode)) throw std::invalid_argument("unknown mode " + mode);
    s.network.variant = *network_variant_from_string(mode);
    s.network.gst = get<SimTime>(scenario, "gst", 0);
    s.network.delta = get<SimTime>(scenario, "delta", 10);
    s.timeout_ticks = get<SimTime>(scenario, "timeout", 5 * s.network.delta);
    s.max_rounds = get<Round>(scenario, "rounds", 40);
    s.gc_enabled = get<bool>(scenario, "gc", false);
    s.faults = parse_faults(strip_quotes(get<std::string>(scenario, "faults", "")));
    s.tx_rate = get<std::uint32_t>(scenario, "tx_rate", 1);

    const auto policy = tree.get_child("policy", pt::ptree{});
    reject_unknown(policy, "policy",
                   {"kind", "min_delay", "max_delay", "base_delay", "starve_delay", "skew_target", "skew_extra"});
    const auto kind = strip_quotes(get<std::string>(policy, "kind", "uniform"));
    if (!policy_kind_from_string(kind)) throw std::invalid_argument("unknown policy " + kind);
    s.policy.kind = *policy_kind_from_string(kind);
    s.policy.min_delay = get<SimTime>(policy, "min_delay", s.policy.min_delay);
    s.policy.max_delay = get<SimTime>(policy, "max_delay", s.policy.max_delay);
    s.policy.base_delay = get<SimTime>(policy, "base_delay", s.policy.base_delay);
    s.policy.starve_delay = get<SimTime>(policy, "starve_delay", s.policy.starve_delay);
    s.policy.skew_target = get<std::uint32_t>(policy, "skew_target", s.policy.skew_target);
    s.policy.skew_extra = get<SimTime>(policy, "skew_extra", s.policy.skew_extra);

    const auto campaign = tree.get_child("campaign", pt::ptree{});
    reject_unknown(campaign, "campaign", {"n_values", "policies", "random_crashes"});
    for (const auto& v : split_list(strip_quotes(get<std::string>(campaign, "n_values", "")))) {
        c.n_values.push_back(static_cast<std::uint32_t>(std::stoul(v)));
    }
    for (const auto& v : split_list(strip_quotes(get<std::string>(campaign, "policies", "")))) {
        auto k = policy_kind_from_string(v);
        if (!k) throw std::invalid_argument("unknown policy " + v);
        c.policies.push_back(*k);
    }
    c.random_crashes = get<bool>(campaign, "random_crashes", false);
    s.validate();
    return c;
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return parse_campaign_config(in);
}

Scenario campaign_scenario(const CampaignConfig& config, std::uint64_t seed) {
    Scenario s = config.base;
    s.seed = seed;
    std::uint64_t slot = seed;
    if (!config.n_values.empty()) {
        const auto n = config.n_values[slot % config.n_values.size()];
        s.committee = Committee(n, (n - 1) / 3);
        slot /= config.n_values.size();
        s.faults.clear();
    }
    if (!config.policies.empty()) s.policy.kind = config.policies[slot % config.policies.size()];
    if (config.random_crashes) {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        const auto crashes = static_cast<std::uint32_t>(rng() % (s.committee.f + 1));
        std::vector<std::uint32_t> ids(s.committee.n);
        for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
        s.faults.clear();
        for (std::uint32_t i = 0; i < crashes; ++i) {
            const auto j = i + rng() % (ids.size() - i);
            std::swap(ids[i], ids[j]);
            s.faults.push_back(Fault{PartyId{ids[i]}, FaultKind::crash, rng() % (s.max_rounds * s.network.delta), 0});
        }
    }
    s.validate();
    return s;
}

CampaignSummary run_campaign(const CampaignConfig& config, std::uint64_t first_seed, std::uint64_t seeds,
                             const CampaignVisitor& visit) {
    CampaignSummary summary;
    for (std::uint64_t seed = first_seed; seed < first_seed + seeds; ++seed) {
        Simulation sim(campaign_scenario(config, seed));
        sim.run();
        CampaignRun run{sim.scenario(), run_all_checks(sim), false};
        run.passed = std::all_of(run.checks.begin(), run.checks.end(), [](const auto& c) { return c.passed; });
        ++summary.runs;
        if (!run.passed) {
            ++summary.failed;
            for (const auto& c : run.checks) {
                if (!c.passed) ++summary.failures_by_check[c.name];
            }
            summary.failures.push_back(run);
        }
        if (visit) visit(sim, run);
    }
    return summary;
}

}  // namespace bullshark
