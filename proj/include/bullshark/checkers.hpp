// Executable safety and liveness properties, evaluated over traces and
// finished simulations.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "bullshark/scenario.hpp"

namespace bullshark {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

/// Per-party sequence of delivered vertex digests, read from a_deliver records.
std::map<std::uint32_t, std::vector<std::string>> ordered_logs(const Trace& trace);

/// Leader (round, source) sequence per party, in delivery order.
using LeaderKey = std::pair<Round, std::uint32_t>;
std::map<std::uint32_t, std::vector<LeaderKey>> leader_sequences(const Trace& trace);

/// Pairwise prefix consistency; with `require_equal`, logs must also be
/// identical (quiescence).
CheckResult check_total_order(const std::map<std::uint32_t, std::vector<std::string>>& logs, bool require_equal);

/// No wave has both a steady-state and a fallback leader committed.
CheckResult check_wave_exclusivity(const Trace& trace);

CheckResult check_leader_agreement(const std::map<std::uint32_t, std::vector<LeaderKey>>& sequences,
                                   bool require_equal);

/// Every (party, wave) vote type must match across the parties that decided it.
CheckResult check_vote_type_agreement(const Trace& trace, const std::vector<std::uint32_t>& honest);

/// Sequence of (gc round, leader round) transitions must match across parties.
CheckResult check_gc_agreement(const Trace& trace, const std::vector<std::uint32_t>& honest);

/// Reliable-broadcast integrity, agreement and validity at quiescence.
CheckResult check_reliable_broadcast(const Trace& trace, std::uint32_t n, const std::vector<std::uint32_t>& honest,
                                     const std::vector<std::uint32_t>& crashed);

/// An honest party broadcasts at most one vertex per round.
CheckResult check_single_broadcast(const Trace& trace);

/// After GST every honest broadcast reaches every recipient within delta of
/// its issue (or first delivery, if issued earlier).
CheckResult check_post_gst_delivery(const Trace& trace, const NetworkMode& mode,
                                    const std::vector<std::uint32_t>& honest);

/// In every wave whose four rounds hold 2f+1 vertices, at least 2f+1
/// first-round vertices are reached by strong paths from 2f+1 last-round vertices.
CheckResult check_common_core(const LocalDag& dag);

/// Vertices the final leader's creator held before creating it (rounds below
/// the leader) must be in every honest log. With `after_gst` set, only
/// vertices broadcast at or after that time by honest parties are required.
CheckResult check_validity(const Simulation& sim, std::optional<SimTime> after_gst);

/// Timely fairness with garbage collection: every post-GST honest vertex whose
/// round was cleared somewhere, or that lies below the final leader, was
/// delivered by every honest party.
CheckResult check_validity_after_gst(const Simulation& sim);

struct CommitLatency {
    std::map<std::uint32_t, std::vector<Round>> direct_commit_rounds;  // per party
    std::map<Round, std::size_t> gap_histogram;
    double mean_gap = 0.0;
    Round max_gap = 0;
};

/// Rounds between consecutive direct commits, per party.
CommitLatency measure_commit_latency(const Trace& trace, const std::vector<std::uint32_t>& parties);

/// Bound on retained rounds derived from delta, the minimum delivery delay
/// and the observed commit cadence.
std::size_t gc_retention_bound(const Scenario& s, Round max_commit_gap);

CheckResult check_gc_bound(const Simulation& sim, Round max_commit_gap);

/// Gaps above two rounds between direct commits must span a leader round
/// whose scheduled party has crashed.
CheckResult check_commit_gaps_explained(const Simulation& sim);

/// Honest timers that expired below the final round.
std::size_t count_timeouts(const Trace& trace, const std::vector<std::uint32_t>& parties, Round below_round);

/// All trace-only checks plus, when a simulation is available, the
/// structural ones. Used by `run`, `check` and the campaign runner.
std::vector<CheckResult> run_trace_checks(const Trace& trace);
std::vector<CheckResult> run_all_checks(const Simulation& sim);

}  // namespace bullshark
