// Simulated reliable broadcast: one discrete-event queue for deliveries and
// timers, with delivery times chosen by an adversarial delay policy.

#pragma once

#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <tuple>
#include <variant>

#include "bullshark/coin.hpp"
#include "bullshark/types.hpp"

namespace bullshark {

enum class NetworkVariant { asynchronous, eventually_synchronous };

std::string_view to_string(NetworkVariant v);
std::optional<NetworkVariant> network_variant_from_string(std::string_view s);

struct NetworkMode {
    NetworkVariant variant = NetworkVariant::asynchronous;
    SimTime gst = 0;
    SimTime delta = 10;
};

enum class PolicyKind { uniform, leader_starve, round_skew, coin_peek };

std::string_view to_string(PolicyKind k);
std::optional<PolicyKind> policy_kind_from_string(std::string_view s);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::uniform;
    SimTime min_delay = 1;
    /// Upper bound of uniform delays (uniform, round_skew, coin_peek).
    SimTime max_delay = 20;
    /// Upper bound for non-leader traffic under leader_starve.
    SimTime base_delay = 10;
    /// Fixed delay of steady-state leader vertices under leader_starve.
    SimTime starve_delay = 150;
    std::uint32_t skew_target = 0;
    SimTime skew_extra = 30;
};

struct DeliveryEvent {
    PartyId recipient;
    PartyId sender;
    Round round = 0;
    VertexPtr vertex;
    SimTime issued_at = 0;
};

struct TimerEvent {
    PartyId party;
    Round round = 0;
    std::uint64_t epoch = 0;
};

struct CrashEvent {
    PartyId party;
};

struct Event {
    SimTime time = 0;
    std::uint64_t seq = 0;
    std::variant<DeliveryEvent, TimerEvent, CrashEvent> body;
};

/// Min-queue on (time, insertion sequence): ties fire in insertion order.
class EventQueue {
public:
    void push(SimTime time, std::variant<DeliveryEvent, TimerEvent, CrashEvent> body);
    Event pop();
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

class Transport {
public:
    enum class BroadcastResult { registered, equivocation };

    Transport(Committee committee, NetworkMode mode, PolicyConfig policy, std::uint64_t seed, EventQueue& queue,
              SeededCoin* coin = nullptr);

    /// Registers the (sender, v.round) instance and enqueues deliveries to
    /// every other party. A second content for the same instance is refused
    /// (the first content wins everywhere); from an honest sender it is a
    /// protocol error.
    BroadcastResult r_bcast(PartyId sender, const VertexPtr& v, SimTime now, bool honest, SimTime extra_lag = 0);

    /// Integrity: true the first time (recipient, sender, round) fires.
    bool accept_delivery(const DeliveryEvent& e);

    /// Delivery time for one recipient of a broadcast issued at `now`.
    SimTime delivery_time(PartyId sender, const Vertex& v, PartyId recipient, SimTime now);

    const NetworkMode& mode() const { return mode_; }
    const PolicyConfig& policy() const { return policy_; }
    std::size_t instance_count() const { return instances_.size(); }

private:
    SimTime draw(SimTime lo, SimTime hi);
    bool is_steady_leader_vertex(const Vertex& v) const;

    Committee committee_;
    NetworkMode mode_;
    PolicyConfig policy_;
    std::mt19937_64 rng_;
    EventQueue& queue_;
    SeededCoin* coin_;
    std::map<std::pair<Round, PartyId>, Digest> instances_;
    std::set<std::tuple<PartyId, PartyId, Round>> fired_;
};

}  // namespace bullshark
