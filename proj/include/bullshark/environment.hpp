#pragma once

#include "bullshark/trace.hpp"
#include "bullshark/types.hpp"

namespace bullshark {

/// What a party's state machine needs from the world around it: a clock,
/// reliable broadcast, timers and a trace sink.
class PartyEnvironment {
public:
    virtual ~PartyEnvironment() = default;

    virtual SimTime now() const = 0;
    virtual void r_bcast(PartyId sender, const VertexPtr& v) = 0;
    virtual void start_timer(PartyId party, Round round, std::uint64_t epoch, SimTime ticks) = 0;
    virtual void record(TraceRecord r) = 0;

    /// Called when `party` enters `round`, before its vertex is created.
    virtual void on_round_entered(PartyId /*party*/, Round /*round*/) {}
};

/// Environment for scripted runs: nothing is broadcast, timers never fire.
class NullEnvironment : public PartyEnvironment {
public:
    SimTime now() const override { return clock; }
    void r_bcast(PartyId, const VertexPtr&) override {}
    void start_timer(PartyId, Round, std::uint64_t, SimTime) override {}
    void record(TraceRecord r) override { trace.add(std::move(r)); }

    SimTime clock = 0;
    Trace trace;
};

}  // namespace bullshark
