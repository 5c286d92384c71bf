#include "fairmatch/history.hpp"

#include <algorithm>

namespace fairmatch {

std::vector<MatchEvent> RoundMatching::events() const {
    std::vector<MatchEvent> out;
    out.reserve(partner.size());
    for (int i = 0; i < size(); ++i) out.push_back({t, i, partner[i]});
    return out;
}

MatchHistory::MatchHistory(MarketShape shape, HistoryMode mode)
    : shape_(shape), mode_(mode), bundles_n_(shape.n), bundles_m_(shape.m) {
    if (shape.n < 1 || shape.m < 1) throw UsageError("market needs at least one agent per side");
}

void MatchHistory::append(std::span<const MatchEvent> events) {
    const int t = t_ + 1;
    std::vector<bool> seen_n(shape_.n, false), seen_m(shape_.m, false);
    for (const MatchEvent& e : events) {
        if (e.t != t) throw HistoryError("event timestep does not follow the history");
        if (e.n_index < 0 || e.n_index >= shape_.n || e.m_index < 0 || e.m_index >= shape_.m)
            throw HistoryError("event references an unknown agent");
        if (seen_n[e.n_index] || seen_m[e.m_index])
            throw HistoryError("agent matched twice in one timestep");
        seen_n[e.n_index] = seen_m[e.m_index] = true;
    }
    if (mode_ == HistoryMode::PerRound) {
        if (static_cast<int>(events.size()) != shape_.n || shape_.n != shape_.m)
            throw HistoryError("per-round history requires a perfect matching each timestep");
    } else if (events.size() > 1) {
        throw HistoryError("per-match history allows at most one match per timestep");
    }

    groups_.emplace_back(events.begin(), events.end());
    for (const MatchEvent& e : events) {
        bundles_n_[e.n_index].push_back({t, e.m_index});
        bundles_m_[e.m_index].push_back({t, e.n_index});
    }
    t_ = t;
}

void MatchHistory::append_round(const RoundMatching& round) {
    append(round.events());
}

const std::vector<BundleEntry>& MatchHistory::bundle(const AgentId& agent) const {
    if (!shape_.contains(agent)) throw UsageError("unknown agent");
    return agent.side == Side::N ? bundles_n_[agent.index] : bundles_m_[agent.index];
}

}  // namespace fairmatch
