// Scenario description and the discrete-event world that runs it.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bullshark/party.hpp"
#include "bullshark/transport.hpp"

namespace bullshark {

enum class FaultKind { crash, delayed, equivocate, malformed };

std::string_view to_string(FaultKind k);

struct Fault {
    PartyId party;
    FaultKind kind = FaultKind::crash;
    SimTime at = 0;   // crash time, or start of malformed output
    SimTime lag = 0;  // extra outgoing delay for `delayed`
};

/// Parses "1:crash@100,2:delayed+30,3:equivocate,0:malformed@50".
std::vector<Fault> parse_faults(const std::string& text);
std::string format_faults(const std::vector<Fault>& faults);

struct Scenario {
    Protocol protocol = Protocol::fallback;
    Committee committee;
    NetworkMode network;
    SimTime timeout_ticks = 50;
    std::uint64_t seed = 0;
    Round max_rounds = 40;
    std::vector<Fault> faults;
    PolicyConfig policy;
    bool gc_enabled = false;
    std::uint32_t tx_rate = 1;

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
    std::string describe() const;
};

class Simulation final : public PartyEnvironment {
public:
    explicit Simulation(Scenario scenario);

    /// Drives the event loop to quiescence. Returns false if the run was
    /// aborted (see error()).
    bool run();

    const Scenario& scenario() const { return scenario_; }
    const Trace& trace() const { return trace_; }
    const Party& party(PartyId p) const { return *parties_.at(p.value); }
    std::size_t party_count() const { return parties_.size(); }
    bool is_faulty(PartyId p) const;
    bool is_crashed(PartyId p) const { return crashed_.at(p.value); }
    std::vector<PartyId> honest_parties() const;
    const std::string& error() const { return error_; }
    std::uint64_t events_fired() const { return events_; }
    /// Largest highest_round - gc_round seen at an honest party, over the
    /// whole run and after GST.
    std::size_t max_retained_rounds() const { return max_retained_; }
    std::size_t max_retained_rounds_after_gst() const { return max_retained_after_gst_; }

    // PartyEnvironment
    SimTime now() const override { return now_; }
    void r_bcast(PartyId sender, const VertexPtr& v) override;
    void start_timer(PartyId party, Round round, std::uint64_t epoch, SimTime ticks) override;
    void record(TraceRecord r) override { trace_.add(std::move(r)); }
    void on_round_entered(PartyId party, Round round) override;

private:
    const Fault* fault_of(PartyId p, FaultKind kind) const;
    void crash(PartyId p);
    void handle(const DeliveryEvent& e);
    void sample_retention(PartyId p);

    Scenario scenario_;
    SeededCoin coin_;
    EventQueue queue_;
    Transport transport_;
    Trace trace_;
    std::vector<std::unique_ptr<Party>> parties_;
    std::vector<bool> crashed_;
    SimTime now_ = 0;
    std::uint64_t events_ = 0;
    std::string error_;
    std::size_t max_retained_ = 0;
    std::size_t max_retained_after_gst_ = 0;
};

}  // namespace bullshark
