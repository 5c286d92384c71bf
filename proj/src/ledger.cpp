#include "fairmatch/ledger.hpp"

namespace fairmatch {

namespace {

void check_same_side(const MarketShape& shape, const AgentId& i, const AgentId& j) {
    if (i.side != j.side)
        throw UsageError("ledger entries are defined for same-side pairs only");
    if (!shape.contains(i) || !shape.contains(j)) throw UsageError("unknown agent");
}

}  // namespace

ValueLedger::ValueLedger(MarketShape shape)
    : shape_(shape),
      values_n_(static_cast<std::size_t>(shape.n) * shape.n),
      values_m_(static_cast<std::size_t>(shape.m) * shape.m),
      sizes_n_(shape.n, 0),
      sizes_m_(shape.m, 0) {}

Rat& ValueLedger::entry(Side side, int i, int j) {
    return side == Side::N ? values_n_[static_cast<std::size_t>(i) * shape_.n + j]
                           : values_m_[static_cast<std::size_t>(i) * shape_.m + j];
}

const Rat& ValueLedger::entry(Side side, int i, int j) const {
    return const_cast<ValueLedger*>(this)->entry(side, i, j);
}

const Rat& ValueLedger::value_of(const AgentId& i, const AgentId& j) const {
    check_same_side(shape_, i, j);
    return entry(i.side, i.index, j.index);
}

Rat ValueLedger::gap(const AgentId& i, const AgentId& j) const {
    return value_of(i, j) - value_of(i, i);
}

int ValueLedger::bundle_size(const AgentId& agent) const {
    if (!shape_.contains(agent)) throw UsageError("unknown agent");
    return agent.side == Side::N ? sizes_n_[agent.index] : sizes_m_[agent.index];
}

KappaLedger::KappaLedger(MarketShape shape)
    : shape_(shape),
      kappa_n_(static_cast<std::size_t>(shape.n) * shape.n, 0),
      kappa_m_(static_cast<std::size_t>(shape.m) * shape.m, 0),
      sizes_n_(shape.n, 0),
      sizes_m_(shape.m, 0) {}

int& KappaLedger::entry(Side side, int i, int j) {
    return side == Side::N ? kappa_n_[static_cast<std::size_t>(i) * shape_.n + j]
                           : kappa_m_[static_cast<std::size_t>(i) * shape_.m + j];
}

const int& KappaLedger::entry(Side side, int i, int j) const {
    return const_cast<KappaLedger*>(this)->entry(side, i, j);
}

int KappaLedger::kappa(const AgentId& i, const AgentId& j) const {
    check_same_side(shape_, i, j);
    return entry(i.side, i.index, j.index);
}

int KappaLedger::bundle_size(const AgentId& agent) const {
    if (!shape_.contains(agent)) throw UsageError("unknown agent");
    return agent.side == Side::N ? sizes_n_[agent.index] : sizes_m_[agent.index];
}

int KappaLedger::kappa_gap(const AgentId& i, const AgentId& j) const {
    return kappa(i, j) - kappa(i, i);
}

Rat KappaLedger::value_from_kappa(const AgentId& i, const AgentId& j, const Rat& a) const {
    const int k = kappa(i, j);
    const int size = bundle_size(j);
    return Rat(k) + a * Rat(size - k);
}

void apply_events(ValueLedger& values, KappaLedger& kappas, const Valuation& oracle,
                  std::span<const MatchEvent> events) {
    const MarketShape shape = values.shape();
    if (kappas.shape() != shape) throw UsageError("ledger shapes disagree");
    if (values.current_t() != kappas.current_t()) throw UsageError("ledger clocks disagree");
    const int t = values.current_t() + 1;

    std::vector<bool> seen_n(shape.n, false), seen_m(shape.m, false);
    for (const MatchEvent& e : events) {
        if (e.t != t) throw HistoryError("event timestep does not follow the ledger");
        if (e.n_index < 0 || e.n_index >= shape.n || e.m_index < 0 || e.m_index >= shape.m)
            throw HistoryError("event references an unknown agent");
        if (seen_n[e.n_index] || seen_m[e.m_index])
            throw HistoryError("agent matched twice in one timestep");
        seen_n[e.n_index] = seen_m[e.m_index] = true;
    }

    for (const MatchEvent& e : events) {
        // Side N observers watch the N participant; side M observers the M one.
        for (int i = 0; i < shape.n; ++i) {
            const Rat v = oracle.value(t, agent_n(i), agent_m(e.m_index));
            values.entry(Side::N, i, e.n_index) += v;
            if (v.is_one()) ++kappas.entry(Side::N, i, e.n_index);
        }
        for (int i = 0; i < shape.m; ++i) {
            const Rat v = oracle.value(t, agent_m(i), agent_n(e.n_index));
            values.entry(Side::M, i, e.m_index) += v;
            if (v.is_one()) ++kappas.entry(Side::M, i, e.m_index);
        }
        ++values.sizes_n_[e.n_index];
        ++values.sizes_m_[e.m_index];
        ++kappas.sizes_n_[e.n_index];
        ++kappas.sizes_m_[e.m_index];
    }
    values.t_ = t;
    kappas.t_ = t;
}

}  // namespace fairmatch
