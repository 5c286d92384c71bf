#pragma once

#include <span>
#include <vector>

#include "fairmatch/history.hpp"
#include "fairmatch/rational.hpp"
#include "fairmatch/valuation.hpp"

namespace fairmatch {

/// Running cumulative values v_i(X_j^t) for every ordered same-side pair,
/// kept as exact rationals. The diagonal holds each agent's own value.
class ValueLedger {
public:
    explicit ValueLedger(MarketShape shape);

    MarketShape shape() const { return shape_; }
    int current_t() const { return t_; }

    /// v_i(X_j^t). Both agents must be on the same side.
    const Rat& value_of(const AgentId& i, const AgentId& j) const;

    /// v_i(X_j^t) - v_i(X_i^t), i's envy gap toward j.
    Rat gap(const AgentId& i, const AgentId& j) const;

    int bundle_size(const AgentId& agent) const;

private:
    friend void apply_events(ValueLedger&, class KappaLedger&, const Valuation&,
                             std::span<const MatchEvent>);

    Rat& entry(Side side, int i, int j);
    const Rat& entry(Side side, int i, int j) const;

    MarketShape shape_;
    int t_ = 0;
    std::vector<Rat> values_n_;  ///< n*n, row-major: observer i, subject j
    std::vector<Rat> values_m_;  ///< m*m
    std::vector<int> sizes_n_;
    std::vector<int> sizes_m_;
};

/// Like-counts kappa_i(X_j^t): how many matches in X_j^t agent i values at
/// exactly 1. For binary valuations with equal bundle sizes the envy-bound
/// verdict reduces to an integer comparison on these counts, independent of
/// the low value a.
class KappaLedger {
public:
    explicit KappaLedger(MarketShape shape);

    MarketShape shape() const { return shape_; }
    int current_t() const { return t_; }

    int kappa(const AgentId& i, const AgentId& j) const;
    int bundle_size(const AgentId& agent) const;

    /// kappa_i(X_j^t) - kappa_i(X_i^t), the integer form of i's envy gap.
    int kappa_gap(const AgentId& i, const AgentId& j) const;

    /// Reconstructs v_i(X_j^t) = kappa + a * (size - kappa).
    Rat value_from_kappa(const AgentId& i, const AgentId& j, const Rat& a) const;

private:
    friend void apply_events(ValueLedger&, KappaLedger&, const Valuation&,
                             std::span<const MatchEvent>);

    int& entry(Side side, int i, int j);
    const int& entry(Side side, int i, int j) const;

    MarketShape shape_;
    int t_ = 0;
    std::vector<int> kappa_n_;
    std::vector<int> kappa_m_;
    std::vector<int> sizes_n_;
    std::vector<int> sizes_m_;
};

/// Applies one timestep's confirmed events to both ledgers: every same-side
/// entry (i, j) grows by v_i^t(x_j^t), kappa grows where that value is 1.
/// The events' timestep must be exactly one past the ledgers' current time.
void apply_events(ValueLedger& values, KappaLedger& kappas, const Valuation& oracle,
                  std::span<const MatchEvent> events);

/// One simulation's mutable state: the confirmed history plus both ledgers,
/// advanced together. Single-writer; snapshots may be copied for
/// concurrent read-only use.
struct SimState {
    MatchHistory history;
    ValueLedger values;
    KappaLedger kappas;

    SimState(MarketShape shape, HistoryMode mode)
        : history(shape, mode), values(shape), kappas(shape) {}

    int current_t() const { return history.current_t(); }

    void apply(const Valuation& oracle, std::span<const MatchEvent> events) {
        history.append(events);
        apply_events(values, kappas, oracle, events);
    }
};

}  // namespace fairmatch
