#include "bullshark/transport.hpp"

#include <algorithm>

namespace bullshark {

std::string_view to_string(NetworkVariant v) {
    return v == NetworkVariant::asynchronous ? "async" : "esync";
}

std::optional<NetworkVariant> network_variant_from_string(std::string_view s) {
    if (s == "async" || s == "asynchronous") return NetworkVariant::asynchronous;
    if (s == "esync" || s == "eventually_synchronous") return NetworkVariant::eventually_synchronous;
    return std::nullopt;
}

std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::uniform: return "uniform";
        case PolicyKind::leader_starve: return "leader_starve";
        case PolicyKind::round_skew: return "round_skew";
        case PolicyKind::coin_peek: return "coin_peek";
    }
    return "unknown";
}

std::optional<PolicyKind> policy_kind_from_string(std::string_view s) {
    for (auto k : {PolicyKind::uniform, PolicyKind::leader_starve, PolicyKind::round_skew, PolicyKind::coin_peek}) {
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

void EventQueue::push(SimTime time, std::variant<DeliveryEvent, TimerEvent, CrashEvent> body) {
    heap_.push(Event{time, next_seq_++, std::move(body)});
}

Event EventQueue::pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
}

Transport::Transport(Committee committee, NetworkMode mode, PolicyConfig policy, std::uint64_t seed,
                     EventQueue& queue, SeededCoin* coin)
    : committee_(committee), mode_(mode), policy_(policy), rng_(seed), queue_(queue), coin_(coin) {
    if (mode_.delta == 0) throw std::invalid_argument("delta must be positive");
    if (policy_.min_delay == 0) throw std::invalid_argument("min_delay must be positive");
}

SimTime Transport::draw(SimTime lo, SimTime hi) {
    if (hi <= lo) return lo;
    return lo + rng_() % (hi - lo + 1);
}

bool Transport::is_steady_leader_vertex(const Vertex& v) const {
    const Wave w = wave_of(v.round);
    if (v.round % 4 == 1) return v.source == committee_.first_steady_leader(w);
    if (v.round % 4 == 3) return v.source == committee_.second_steady_leader(w);
    return false;
}

SimTime Transport::delivery_time(PartyId /*sender*/, const Vertex& v, PartyId recipient, SimTime now) {
    SimTime delay = 0;
    switch (policy_.kind) {
        case PolicyKind::uniform:
        case PolicyKind::coin_peek:
            delay = draw(policy_.min_delay, policy_.max_delay);
            break;
        case PolicyKind::leader_starve:
            delay = is_steady_leader_vertex(v) ? policy_.starve_delay
                                               : draw(policy_.min_delay, policy_.base_delay);
            break;
        case PolicyKind::round_skew:
            delay = draw(policy_.min_delay, policy_.max_delay);
            if (recipient.value == policy_.skew_target) delay += policy_.skew_extra;
            break;
    }
    delay = std::max(delay, policy_.min_delay);

    SimTime at = now + delay;
    if (mode_.variant == NetworkVariant::eventually_synchronous) {
        // Property 1: post-GST broadcasts land within delta; earlier ones
        // land by gst + delta at the latest.
        const SimTime bound = std::max(now, mode_.gst) + mode_.delta;
        at = std::min(at, bound);
        at = std::max(at, now + 1);
    }
    return at;
}

Transport::BroadcastResult Transport::r_bcast(PartyId sender, const VertexPtr& v, SimTime now, bool honest,
                                              SimTime extra_lag) {
    const auto key = std::make_pair(v->round, sender);
    if (auto it = instances_.find(key); it != instances_.end()) {
        if (honest) throw ProtocolError("duplicate broadcast from honest party " + std::to_string(sender.value));
        return BroadcastResult::equivocation;
    }
    instances_.emplace(key, v->digest);

    if (policy_.kind == PolicyKind::coin_peek && coin_ && v->round % 4 == 1) {
        // Keyed on the wave's fallback leader before anyone could know it.
        (void)coin_->adversary_query(wave_of(v->round));
    }

    for (auto p : committee_.parties()) {
        if (p == sender) continue;
        const SimTime at = delivery_time(sender, *v, p, now) + extra_lag;
        queue_.push(at, DeliveryEvent{p, sender, v->round, v, now});
    }
    return BroadcastResult::registered;
}

bool Transport::accept_delivery(const DeliveryEvent& e) {
    return fired_.emplace(e.recipient, e.sender, e.round).second;
}

}  // namespace bullshark
