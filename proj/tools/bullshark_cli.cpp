// Command-line front end: single runs, figure replays, seed campaigns and
// offline trace checks.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "bullshark/campaign.hpp"
#include "bullshark/replay.hpp"
#include "bullshark/report.hpp"

using namespace bullshark;

namespace {

void print_checks(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << '\n';
    }
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

struct RunOptions {
    std::string protocol = "fallback";
    std::uint32_t n = 4;
    std::uint32_t f = 1;
    std::string mode = "async";
    SimTime gst = 0;
    SimTime delta = 10;
    SimTime timeout = 0;
    std::uint64_t seed = 0;
    Round rounds = 40;
    std::string policy = "uniform";
    bool gc = false;
    std::string faults;
    std::string trace_out;
    std::string report_out;
};

Scenario scenario_from(const RunOptions& o) {
    Scenario s;
    auto protocol = protocol_from_string(o.protocol);
    if (!protocol) throw std::invalid_argument("unknown protocol " + o.protocol);
    s.protocol = *protocol;
    s.committee = Committee(o.n, o.f);
    auto mode = network_variant_from_string(o.mode);
    if (!mode) throw std::invalid_argument("unknown mode " + o.mode);
    s.network = NetworkMode{*mode, o.gst, o.delta};
    s.timeout_ticks = o.timeout ? o.timeout : 5 * o.delta;
    s.seed = o.seed;
    s.max_rounds = o.rounds;
    auto policy = policy_kind_from_string(o.policy);
    if (!policy) throw std::invalid_argument("unknown policy " + o.policy);
    s.policy.kind = *policy;
    s.gc_enabled = o.gc;
    s.faults = parse_faults(o.faults);
    s.validate();
    return s;
}

int cmd_run(const RunOptions& o) {
    Simulation sim(scenario_from(o));
    sim.run();
    const auto checks = run_all_checks(sim);
    if (!o.trace_out.empty()) {
        std::ofstream out(o.trace_out);
        if (!out) throw std::runtime_error("cannot write " + o.trace_out);
        sim.trace().write_jsonl(out);
    }
    write_json(o.report_out, build_report(sim, checks));
    std::cout << sim.scenario().describe() << '\n';
    std::cout << "events=" << sim.events_fired() << " final_time=" << sim.now() << '\n';
    print_checks(checks);
    return all_passed(checks) ? 0 : 1;
}

int cmd_replay(const std::string& figure, const std::string& report_out) {
    const auto outcome = replay_figure(figure);
    std::cout << "figure " << outcome.figure << ": committed";
    for (const auto& n : outcome.committed_names) std::cout << ' ' << n;
    std::cout << '\n';
    print_checks(outcome.checks);
    write_json(report_out, replay_report(outcome));
    return outcome.passed ? 0 : 1;
}

int cmd_campaign(std::uint64_t seeds, const std::string& config_path, std::uint64_t first_seed) {
    const auto config = load_campaign_config(config_path);
    const auto summary = run_campaign(config, first_seed, seeds);
    std::cout << "runs=" << summary.runs << " failed=" << summary.failed << '\n';
    for (const auto& [name, count] : summary.failures_by_check) std::cout << "  " << name << ": " << count << '\n';
    for (const auto& run : summary.failures) {
        std::cout << "FAIL seed=" << run.scenario.seed << " " << run.scenario.describe() << '\n';
        for (const auto& c : run.checks) {
            if (!c.passed) std::cout << "  " << c.name << ": " << c.detail << '\n';
        }
    }
    return summary.failed == 0 ? 0 : 1;
}

int cmd_check(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    const auto trace = Trace::read_jsonl(in);
    const auto checks = run_trace_checks(trace);
    std::cout << "records=" << trace.records().size() << '\n';
    print_checks(checks);
    return all_passed(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic Bullshark DAG-BFT simulator"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run one scenario and check it");
    run_cmd->add_option("--protocol", run.protocol, "fallback or psync")->capture_default_str();
    run_cmd->add_option("--n", run.n, "Number of parties")->capture_default_str();
    run_cmd->add_option("--f", run.f, "Fault bound (n = 3f+1)")->capture_default_str();
    run_cmd->add_option("--mode", run.mode, "async or esync")->capture_default_str();
    run_cmd->add_option("--gst", run.gst, "Global stabilization time (esync)")->capture_default_str();
    run_cmd->add_option("--delta", run.delta, "Post-GST delivery bound")->capture_default_str();
    run_cmd->add_option("--timeout", run.timeout, "Round timeout in ticks (default 5*delta)");
    run_cmd->add_option("--seed", run.seed, "Scheduler and coin seed")->capture_default_str();
    run_cmd->add_option("--rounds", run.rounds, "Highest round any party enters")->capture_default_str();
    run_cmd->add_option("--policy", run.policy, "uniform, leader_starve, round_skew or coin_peek")
        ->capture_default_str();
    run_cmd->add_flag("--gc", run.gc, "Enable garbage collection");
    run_cmd->add_option("--faults", run.faults, "e.g. 1:crash@100,2:delayed+30,3:equivocate,0:malformed@50");
    run_cmd->add_option("--trace-out", run.trace_out, "Write the JSONL trace here");
    run_cmd->add_option("--report-out", run.report_out, "Write the JSON report here");

    std::string figure;
    std::string replay_report_out;
    auto* replay_cmd = app.add_subcommand("replay", "Replay a scripted figure");
    replay_cmd->add_option("--figure", figure, "fig1 or appendixA")->required();
    replay_cmd->add_option("--report-out", replay_report_out, "Write the JSON report here");

    std::uint64_t seeds = 0;
    std::uint64_t first_seed = 0;
    std::string config;
    auto* campaign_cmd = app.add_subcommand("campaign", "Run a seed sweep from a config file");
    campaign_cmd->add_option("--seeds", seeds, "Number of seeds")->required();
    campaign_cmd->add_option("--first-seed", first_seed, "First seed")->capture_default_str();
    campaign_cmd->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);

    std::string trace_path;
    auto* check_cmd = app.add_subcommand("check", "Run the trace checkers on a JSONL trace");
    check_cmd->add_option("--trace", trace_path, "Trace file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(run);
        if (*replay_cmd) return cmd_replay(figure, replay_report_out);
        if (*campaign_cmd) return cmd_campaign(seeds, config, first_seed);
        if (*check_cmd) return cmd_check(trace_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
