#include "bullshark/scenario.hpp"

#include <sstream>

namespace bullshark {

namespace {

constexpr std::uint64_t kMaxEvents = 50'000'000;

std::uint64_t parse_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    const auto value = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad " + what + ": " + s);
    return value;
}

}  // namespace

std::string_view to_string(FaultKind k) {
    switch (k) {
        case FaultKind::crash: return "crash";
        case FaultKind::delayed: return "delayed";
        case FaultKind::equivocate: return "equivocate";
        case FaultKind::malformed: return "malformed";
    }
    return "unknown";
}

std::vector<Fault> parse_faults(const std::string& text) {
    std::vector<Fault> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("fault needs party:kind, got " + item);
        Fault f;
        f.party = PartyId{static_cast<std::uint32_t>(parse_number(item.substr(0, colon), "party"))};
        std::string kind_text = item.substr(colon + 1);
        std::string arg;
        if (auto at = kind_text.find_first_of("@+"); at != std::string::npos) {
            arg = kind_text.substr(at + 1);
            kind_text = kind_text.substr(0, at);
        }
        if (kind_text == "crash") {
            f.kind = FaultKind::crash;
            f.at = arg.empty() ? 0 : parse_number(arg, "crash time");
        } else if (kind_text == "delayed") {
            f.kind = FaultKind::delayed;
            f.lag = arg.empty() ? 30 : parse_number(arg, "lag");
        } else if (kind_text == "equivocate") {
            f.kind = FaultKind::equivocate;
        } else if (kind_text == "malformed") {
            f.kind = FaultKind::malformed;
            f.at = arg.empty() ? 0 : parse_number(arg, "malformed start");
        } else {
            throw std::invalid_argument("unknown fault kind " + kind_text);
        }
        out.push_back(f);
    }
    return out;
}

std::string format_faults(const std::vector<Fault>& faults) {
    std::string out;
    for (const auto& f : faults) {
        if (!out.empty()) out += ',';
        out += std::to_string(f.party.value) + ':' + std::string(to_string(f.kind));
        if (f.kind == FaultKind::crash || f.kind == FaultKind::malformed) out += '@' + std::to_string(f.at);
        if (f.kind == FaultKind::delayed) out += '+' + std::to_string(f.lag);
    }
    return out;
}

void Scenario::validate() const {
    if (committee.n != 3 * committee.f + 1) throw std::invalid_argument("n must equal 3f+1");
    if (max_rounds == 0) throw std::invalid_argument("rounds must be positive");
    if (timeout_ticks == 0) throw std::invalid_argument("timeout must be positive");
    if (network.delta == 0) throw std::invalid_argument("delta must be positive");
    if (policy.min_delay == 0) throw std::invalid_argument("min_delay must be positive");
    std::set<PartyId> faulty;
    for (const auto& f : faults) {
        if (!committee.contains(f.party)) throw std::invalid_argument("fault names an unknown party");
        faulty.insert(f.party);
    }
    if (faulty.size() > committee.f) throw std::invalid_argument("more faulty parties than f");
}

std::string Scenario::describe() const {
    std::ostringstream os;
    os << "protocol=" << to_string(protocol) << " n=" << committee.n << " f=" << committee.f
       << " mode=" << to_string(network.variant) << " gst=" << network.gst << " delta=" << network.delta
       << " timeout=" << timeout_ticks << " seed=" << seed << " rounds=" << max_rounds
       << " policy=" << to_string(policy.kind) << " gc=" << (gc_enabled ? 1 : 0)
       << " faults=" << (faults.empty() ? "none" : format_faults(faults));
    return os.str();
}

Simulation::Simulation(Scenario scenario)
    : scenario_((scenario.validate(), std::move(scenario))),
      coin_(scenario_.seed, scenario_.committee),
      transport_(scenario_.committee, scenario_.network, scenario_.policy, scenario_.seed, queue_, &coin_),
      crashed_(scenario_.committee.n, false) {
    DagCoreConfig core;
    core.timeout_ticks = scenario_.timeout_ticks;
    core.max_round = scenario_.max_rounds;
    std::optional<GcConfig> gc;
    if (scenario_.gc_enabled) gc = GcConfig{scenario_.network.delta};
    for (auto p : scenario_.committee.parties()) {
        parties_.push_back(std::make_unique<Party>(p, scenario_.committee, scenario_.protocol, coin_, *this, core, gc));
    }
}

const Fault* Simulation::fault_of(PartyId p, FaultKind kind) const {
    for (const auto& f : scenario_.faults) {
        if (f.party == p && f.kind == kind) return &f;
    }
    return nullptr;
}

bool Simulation::is_faulty(PartyId p) const {
    for (const auto& f : scenario_.faults) {
        if (f.party == p) return true;
    }
    return false;
}

std::vector<PartyId> Simulation::honest_parties() const {
    std::vector<PartyId> out;
    for (auto p : scenario_.committee.parties()) {
        if (!is_faulty(p)) out.push_back(p);
    }
    return out;
}

void Simulation::crash(PartyId p) {
    if (crashed_[p.value]) return;
    crashed_[p.value] = true;
    record(TraceRecord{now_, TraceKind::crash, std::nullopt, p.value, std::nullopt, "", ""});
}

bool Simulation::run() {
    record(TraceRecord{0, TraceKind::scenario, std::nullopt, std::nullopt, std::nullopt, "", scenario_.describe()});
    try {
        for (const auto& f : scenario_.faults) {
            if (f.kind != FaultKind::crash) continue;
            if (f.at == 0) {
                crash(f.party);
            } else {
                queue_.push(f.at, CrashEvent{f.party});
            }
        }
        for (auto& party : parties_) {
            if (!crashed_[party->id().value]) party->core().start();
        }
        while (!queue_.empty()) {
            if (++events_ > kMaxEvents) throw ProtocolError("event budget exhausted");
            Event e = queue_.pop();
            now_ = e.time;
            if (auto* d = std::get_if<DeliveryEvent>(&e.body)) {
                handle(*d);
            } else if (auto* t = std::get_if<TimerEvent>(&e.body)) {
                if (!crashed_[t->party.value]) parties_[t->party.value]->core().on_timeout(t->round, t->epoch);
            } else {
                crash(std::get<CrashEvent>(e.body).party);
            }
        }
    } catch (const CoinGateViolation& ex) {
        error_ = std::string("coin gate violation: ") + ex.what();
        record(TraceRecord{now_, TraceKind::coin_query, std::nullopt, std::nullopt, std::nullopt, "",
                           "rejected " + std::string(ex.what())});
        return false;
    } catch (const ProtocolError& ex) {
        error_ = ex.what();
        return false;
    }
    return true;
}

void Simulation::handle(const DeliveryEvent& e) {
    const std::string digest = to_hex(e.vertex->digest);
    if (crashed_[e.recipient.value]) {
        record(TraceRecord{now_, TraceKind::deliver_dropped, e.sender.value, e.recipient.value, e.round, digest,
                           "reason=crashed"});
        return;
    }
    if (!transport_.accept_delivery(e)) {
        record(TraceRecord{now_, TraceKind::deliver_dropped, e.sender.value, e.recipient.value, e.round, digest,
                           "reason=duplicate"});
        return;
    }
    record(TraceRecord{now_, TraceKind::deliver, e.sender.value, e.recipient.value, e.round, digest,
                       "issued=" + std::to_string(e.issued_at)});
    parties_[e.recipient.value]->core().on_r_deliver(e.vertex, e.round, e.sender);
    sample_retention(e.recipient);
}

void Simulation::sample_retention(PartyId p) {
    if (is_faulty(p)) return;
    const std::size_t retained = parties_[p.value]->dag().retained_rounds();
    max_retained_ = std::max(max_retained_, retained);
    if (now_ >= scenario_.network.gst) max_retained_after_gst_ = std::max(max_retained_after_gst_, retained);
}

void Simulation::r_bcast(PartyId sender, const VertexPtr& v) {
    if (crashed_[sender.value]) return;
    const bool honest = !is_faulty(sender);
    if (honest && v->round % 4 == 0) coin_.note_round_end_vertex(wave_of(v->round), sender);

    VertexPtr sent = v;
    if (const auto* m = fault_of(sender, FaultKind::malformed); m && now_ >= m->at) {
        Vertex bad = *v;
        bad.strong_edges.resize(scenario_.committee.quorum() - 1);
        sent = seal(std::move(bad));
    }
    const auto* delayed = fault_of(sender, FaultKind::delayed);
    transport_.r_bcast(sender, sent, now_, honest, delayed ? delayed->lag : 0);

    if (fault_of(sender, FaultKind::equivocate)) {
        Vertex twin = *sent;
        twin.block.payload += "/equivocation";
        auto conflicting = seal(std::move(twin));
        if (transport_.r_bcast(sender, conflicting, now_, honest) == Transport::BroadcastResult::equivocation) {
            record(TraceRecord{now_, TraceKind::deliver_dropped, sender.value, std::nullopt, v->round,
                               to_hex(conflicting->digest), "reason=equivocation"});
        }
    }
    sample_retention(sender);
}

void Simulation::start_timer(PartyId party, Round round, std::uint64_t epoch, SimTime ticks) {
    queue_.push(now_ + ticks, TimerEvent{party, round, epoch});
}

void Simulation::on_round_entered(PartyId party, Round round) {
    for (std::uint32_t i = 0; i < scenario_.tx_rate; ++i) {
        parties_[party.value]->core().a_bcast("p" + std::to_string(party.value) + "/r" + std::to_string(round) +
                                              "/" + std::to_string(i));
    }
}

}  // namespace bullshark
