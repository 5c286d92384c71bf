#pragma once

#include <span>
#include <vector>

#include "fairmatch/types.hpp"

namespace fairmatch {

/// One confirmed match: an N-agent paired with an M-agent at timestep t.
struct MatchEvent {
    int t = 0;
    int n_index = 0;
    int m_index = 0;

    friend bool operator==(const MatchEvent&, const MatchEvent&) = default;
};

/// A perfect matching for one timestep, stored as the M-partner of each
/// N-agent: partner[i] == j means {N_i, M_j} is matched.
struct RoundMatching {
    int t = 0;
    std::vector<int> partner;

    int size() const { return static_cast<int>(partner.size()); }
    std::vector<MatchEvent> events() const;

    friend bool operator==(const RoundMatching&, const RoundMatching&) = default;
};

/// How timesteps are shaped: one perfect matching per step, or at most
/// one single match per step.
enum class HistoryMode { PerRound, PerMatch };

/// One occurrence in an agent's cumulative bundle: when it happened and
/// which agent on the other side it was.
struct BundleEntry {
    int t = 0;
    int partner = 0;  ///< index on the other side
};

/// Append-only record of confirmed matches, grouped by timestep.
/// Cumulative bundles X_i^t are derived views over this record; with
/// dynamic valuations a bundle's value depends on when each match
/// happened, so the timestamped sequence is the primary object.
class MatchHistory {
public:
    MatchHistory(MarketShape shape, HistoryMode mode);

    MarketShape shape() const { return shape_; }
    HistoryMode mode() const { return mode_; }
    int current_t() const { return t_; }

    /// Confirms the events of timestep current_t()+1. In PerRound mode the
    /// events must form a perfect matching; in PerMatch mode at most one
    /// match is allowed (zero models a skipped step). Throws HistoryError
    /// on timestep gaps, duplicate agents, or out-of-range indices.
    void append(std::span<const MatchEvent> events);
    void append_round(const RoundMatching& round);

    /// The multiset of (t, partner) occurrences of one agent through the
    /// current time, in confirmation order.
    const std::vector<BundleEntry>& bundle(const AgentId& agent) const;

    /// Events grouped by timestep; group g holds timestep g+1.
    const std::vector<std::vector<MatchEvent>>& groups() const { return groups_; }

private:
    MarketShape shape_;
    HistoryMode mode_;
    int t_ = 0;
    std::vector<std::vector<MatchEvent>> groups_;
    std::vector<std::vector<BundleEntry>> bundles_n_;
    std::vector<std::vector<BundleEntry>> bundles_m_;
};

}  // namespace fairmatch
