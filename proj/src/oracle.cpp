#include "fairmatch/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fairmatch/envy.hpp"
#include "fairmatch/matching.hpp"

namespace fairmatch::oracle {

Rat bundle_value(const MatchHistory& history, const Valuation& oracle, const AgentId& observer,
                 const AgentId& subject) {
    if (observer.side != subject.side)
        throw UsageError("bundle values are observed within one side");
    Rat total(0);
    for (const BundleEntry& entry : history.bundle(subject))
        total += oracle.value(entry.t, observer, AgentId{other_side(subject.side), entry.partner});
    return total;
}

DefnFairness ef_up_to(const MatchHistory& history, const Valuation& oracle, int removals) {
    const MarketShape shape = history.shape();
    for (Side side : {Side::N, Side::M}) {
        const int size = shape.side_size(side);
        for (int i = 0; i < size; ++i) {
            const AgentId ai{side, i};
            const Rat own = bundle_value(history, oracle, ai, ai);
            for (int j = 0; j < size; ++j) {
                if (i == j) continue;
                const AgentId aj{side, j};
                Rat theirs = bundle_value(history, oracle, ai, aj);
                if (theirs <= own) continue;
                // Drop the `removals` largest time-stamped contributions.
                std::vector<Rat> contributions;
                for (const BundleEntry& entry : history.bundle(aj))
                    contributions.push_back(
                        oracle.value(entry.t, ai, AgentId{other_side(side), entry.partner}));
                std::sort(contributions.begin(), contributions.end(),
                          [](const Rat& x, const Rat& y) { return y < x; });
                for (int r = 0; r < removals && r < static_cast<int>(contributions.size()); ++r)
                    theirs -= contributions[r];
                if (theirs > own) return {false, ai, aj};
            }
        }
    }
    return {};
}

namespace {

std::string dump_values(const MatchHistory& history, const Valuation& oracle) {
    std::ostringstream out;
    const MarketShape shape = history.shape();
    for (Side side : {Side::N, Side::M}) {
        const int size = shape.side_size(side);
        out << "side " << side_name(side) << " cumulative values (row observer):\n";
        for (int i = 0; i < size; ++i) {
            for (int j = 0; j < size; ++j)
                out << "  " << bundle_value(history, oracle, {side, i}, {side, j}).str();
            out << "\n";
        }
    }
    return out.str();
}

VerifyReport fail(int t, std::string what, const MatchHistory& history,
                  const Valuation& oracle) {
    VerifyReport report;
    report.ok = false;
    report.failed_t = t;
    report.what = std::move(what);
    report.state_dump = dump_values(history, oracle);
    return report;
}

/// Envy graph built from definitional values rather than ledgers.
envy::EnvyGraph defn_envy_graph(const MatchHistory& history, const Valuation& oracle,
                                Side side) {
    const int size = history.shape().side_size(side);
    envy::EnvyGraph g;
    g.side = side;
    g.size = size;
    g.adj.assign(size, std::vector<bool>(size, false));
    for (int i = 0; i < size; ++i) {
        const Rat own = bundle_value(history, oracle, {side, i}, {side, i});
        for (int j = 0; j < size; ++j)
            if (i != j && bundle_value(history, oracle, {side, i}, {side, j}) > own)
                g.adj[i][j] = true;
    }
    return g;
}

}  // namespace

VerifyReport verify_trace(const Instance& instance, const Trace& trace, std::string_view mode) {
    if (mode != trace.mode)
        throw UsageError("trace was written in " + trace.mode + " mode, not " +
                         std::string(mode));
    const MarketShape shape = instance.shape;
    const bool rounds = trace.mode == "rounds";
    if (rounds && !shape.square())
        throw ParseError("rounds-mode trace over a non-square market");

    const Valuation& oracle = *instance.valuation;
    const bool rounds_engine = trace.engine == "sym-bin";
    std::optional<Rat> bound;
    if (rounds_engine) {
        const std::optional<Rat> a = trace.a ? trace.a : instance.a;
        if (!a) throw ParseError("rounds-engine trace without a low value a");
        bound = Rat(1) - *a;
    }

    MatchHistory history(shape, rounds ? HistoryMode::PerRound : HistoryMode::PerMatch);
    for (const TraceRecord& rec : trace.records) {
        const int t = rec.t;
        std::vector<MatchEvent> events;
        for (const auto& [ni, mi] : rec.matches) events.push_back({t, ni, mi});
        try {
            history.append(events);
        } catch (const HistoryError& e) {
            return fail(t, std::string("shape violation: ") + e.what(), history, oracle);
        }

        const DefnFairness ef1 = ef_up_to(history, oracle, 1);
        if (!ef1.ok)
            return fail(t,
                        "EF1 violated: " + to_string(ef1.envier) + " envies " +
                            to_string(ef1.envied) + " beyond one removal",
                        history, oracle);
        if (!rec.ef1)
            return fail(t, "recorded EF1 verdict disagrees (record says false)", history, oracle);

        if (!rounds_engine) continue;

        const auto weights = matching::RoundWeights::from_oracle(oracle, t);
        RoundMatching x;
        x.t = t;
        x.partner.assign(shape.n, -1);
        for (const auto& [ni, mi] : rec.matches) x.partner[ni] = mi;
        const Rat weight = matching_weight(weights, x);
        const Rat optimum = matching::max_weight_matching_general(weights).weight;
        if (weight != optimum)
            return fail(t,
                        "matching weight " + weight.str() + " is below the optimum " +
                            optimum.str(),
                        history, oracle);
        if (!rec.weight || *rec.weight != weight)
            return fail(t, "recorded weight disagrees with the recomputed " + weight.str(),
                        history, oracle);

        for (Side side : {Side::N, Side::M}) {
            const int size = shape.side_size(side);
            for (int i = 0; i < size; ++i) {
                const AgentId ai{side, i};
                const Rat own = bundle_value(history, oracle, ai, ai);
                for (int j = 0; j < size; ++j) {
                    if (i == j) continue;
                    const AgentId aj{side, j};
                    if (bundle_value(history, oracle, ai, aj) - own > *bound)
                        return fail(t,
                                    "envy bound exceeded: " + to_string(ai) + " toward " +
                                        to_string(aj),
                                    history, oracle);
                }
            }
            if (auto cycle = envy::has_envy_cycle(defn_envy_graph(history, oracle, side)))
                return fail(t,
                            std::string("envy cycle on side ") + side_name(side) + " through " +
                                to_string(AgentId{side, cycle->front()}),
                            history, oracle);
        }
        if (rec.envy_bounded && !*rec.envy_bounded)
            return fail(t, "recorded envy-bound verdict disagrees", history, oracle);
        if (rec.envy_cycle_free && !*rec.envy_cycle_free)
            return fail(t, "recorded envy-cycle verdict disagrees", history, oracle);
    }
    return {};
}

namespace {

struct SearchDriver {
    const Instance& instance;
    SearchConstraint constraint;
    const PrefixHook& hook;
    int horizon;
    SequenceSearchResult result;

    bool dfs(SimState& state, std::vector<RoundMatching>& prefix) {
        const int t = state.current_t() + 1;
        // Candidate matchings for this round; weights do not depend on the
        // history, so the filter is computed per depth.
        std::vector<RoundMatching> candidates;
        const auto weights = matching::RoundWeights::from_oracle(*instance.valuation, t);
        const Rat optimum = matching::brute_force_max_weight(weights).weight;
        matching::enumerate_perfect_matchings(instance.shape, [&](const RoundMatching& x) {
            if (constraint == SearchConstraint::MaxWeightOnly &&
                matching_weight(weights, x) != optimum)
                return;
            candidates.push_back(x);
        });

        for (RoundMatching x : candidates) {
            x.t = t;
            SimState next = state;
            next.apply(*instance.valuation, x.events());
            ++result.explored;
            if (!envy::is_ef1(next.history, next.values, *instance.valuation).ok) {
                ++result.closed_branches;
                continue;
            }
            if (hook) hook(next, t);
            prefix.push_back(x);
            if (t == horizon) {
                ++result.closed_branches;
                result.witness = prefix;
                return true;
            }
            if (dfs(next, prefix)) return true;
            prefix.pop_back();
        }
        return false;
    }
};

}  // namespace

SequenceSearchResult exhaustive_sequence_search(const Instance& instance, int horizon,
                                                SearchConstraint constraint,
                                                SearchProperty property, const PrefixHook& hook) {
    if (property != SearchProperty::Ef1EachRound) throw UsageError("unknown search property");
    if (!instance.shape.square() || instance.shape.n > 4 || horizon > 8 || horizon < 1)
        throw GuardError("sequence search is guarded to n = m <= 4 and horizon <= 8");

    SearchDriver driver{instance, constraint, hook, horizon, {}};
    driver.result.horizon = horizon;
    SimState state(instance.shape, HistoryMode::PerRound);
    std::vector<RoundMatching> prefix;
    driver.result.exists = driver.dfs(state, prefix);
    if (!driver.result.exists) driver.result.witness.clear();
    return driver.result;
}

namespace {

/// Pair-indexed cumulative values plus the two largest single
/// contributions, maintained incrementally for the expansion check.
struct PairTable {
    MarketShape shape;
    std::vector<Rat> value_n, value_m;
    std::vector<Rat> best_n, second_n, best_m, second_m;

    explicit PairTable(MarketShape s)
        : shape(s),
          value_n(static_cast<std::size_t>(s.n) * s.n),
          value_m(static_cast<std::size_t>(s.m) * s.m),
          best_n(value_n.size()),
          second_n(value_n.size()),
          best_m(value_m.size()),
          second_m(value_m.size()) {}

    void add(Side side, int observer, int subject, const Rat& v) {
        const std::size_t at = side == Side::N
                                   ? static_cast<std::size_t>(observer) * shape.n + subject
                                   : static_cast<std::size_t>(observer) * shape.m + subject;
        auto& value = side == Side::N ? value_n : value_m;
        auto& best = side == Side::N ? best_n : best_m;
        auto& second = side == Side::N ? second_n : second_m;
        value[at] += v;
        if (v > best[at]) {
            second[at] = best[at];
            best[at] = v;
        } else if (v > second[at]) {
            second[at] = v;
        }
    }

    void apply_event(const Valuation& oracle, const MatchEvent& e) {
        for (int i = 0; i < shape.n; ++i)
            add(Side::N, i, e.n_index, oracle.value(e.t, agent_n(i), agent_m(e.m_index)));
        for (int i = 0; i < shape.m; ++i)
            add(Side::M, i, e.m_index, oracle.value(e.t, agent_m(i), agent_n(e.n_index)));
    }

    /// Is some pair envious beyond two removals?
    bool ef2_violated(int* envier = nullptr, int* envied = nullptr, Side* side = nullptr) const {
        for (Side s : {Side::N, Side::M}) {
            const int size = s == Side::N ? shape.n : shape.m;
            const auto& value = s == Side::N ? value_n : value_m;
            const auto& best = s == Side::N ? best_n : best_m;
            const auto& second = s == Side::N ? second_n : second_m;
            for (int i = 0; i < size; ++i) {
                const Rat& own = value[static_cast<std::size_t>(i) * size + i];
                for (int j = 0; j < size; ++j) {
                    if (i == j) continue;
                    const std::size_t at = static_cast<std::size_t>(i) * size + j;
                    if (value[at] - best[at] - second[at] > own) {
                        if (envier) *envier = i;
                        if (envied) *envied = j;
                        if (side) *side = s;
                        return true;
                    }
                }
            }
        }
        return false;
    }
};

void permutations_of(int n, std::vector<std::vector<int>>& out) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    do {
        out.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
}

}  // namespace

ExpansionReport ef2_over_time_expansion(const Instance& instance,
                                        const std::vector<RoundMatching>& rounds) {
    const MarketShape shape = instance.shape;
    if (!shape.square()) throw UsageError("expansion applies to rounds-mode sequences");
    const Valuation& oracle = *instance.valuation;

    std::vector<std::vector<int>> orders;
    if (shape.n <= 4) {
        permutations_of(shape.n, orders);
    } else {
        // Above the exhaustive guard, a fixed deterministic sample: the
        // identity, its reverse, and rotations.
        std::vector<int> order(shape.n);
        std::iota(order.begin(), order.end(), 0);
        for (int r = 0; r < shape.n; ++r) {
            orders.push_back(order);
            std::rotate(order.begin(), order.begin() + 1, order.end());
        }
        std::reverse(order.begin(), order.end());
        orders.push_back(order);
    }

    PairTable base(shape);
    int t = 0;
    for (const RoundMatching& round : rounds) {
        ++t;
        const auto events = round.events();
        // Each intra-round order replays this round match by match on top
        // of the confirmed prefix; every intermediate point must stay
        // envy-free up to two removals.
        for (const auto& order : orders) {
            PairTable partial = base;
            for (int step : order) {
                MatchEvent e = events[step];
                e.t = t;
                partial.apply_event(oracle, e);
                int envier = 0, envied = 0;
                Side side = Side::N;
                if (partial.ef2_violated(&envier, &envied, &side)) {
                    ExpansionReport report;
                    report.ok = false;
                    report.failed_round = t;
                    report.what = "EF2 violated mid-round: " + to_string({side, envier}) +
                                  " envies " + to_string({side, envied}) +
                                  " beyond two removals";
                    return report;
                }
            }
        }
        for (const MatchEvent& e : events) {
            MatchEvent timed = e;
            timed.t = t;
            base.apply_event(oracle, timed);
        }
    }
    return {};
}

namespace {

ValueMatrix zero_matrix(int total) {
    return ValueMatrix(total, std::vector<Rat>(total, Rat(0)));
}

Instance table_instance(MarketShape shape, ValueMatrix table, Capabilities caps,
                        std::optional<Rat> a) {
    Instance inst;
    inst.shape = shape;
    inst.a = std::move(a);
    inst.valuation = std::make_shared<TableValuation>(shape, std::move(table), std::move(caps));
    return inst;
}

}  // namespace

Instance swap_demo_instance() {
    // Two N-agents both like the first M-agent, mutually; nothing else.
    const MarketShape shape{2, 2};
    ValueMatrix table = zero_matrix(4);
    table[0][2] = table[2][0] = Rat(1);  // N0 -- M0
    table[1][2] = table[2][1] = Rat(1);  // N1 -- M0
    Capabilities caps;
    caps.symmetric = caps.binary = caps.binary01 = true;
    caps.a = Rat(0);
    return table_instance(shape, std::move(table), std::move(caps), Rat(0));
}

Instance envy_cycle_demo_instance(const Rat& a) {
    // One pairing is worth only a; the other three are mutually liked.
    const MarketShape shape{2, 2};
    ValueMatrix table = zero_matrix(4);
    table[0][2] = table[2][0] = a;       // N0 -- M0
    table[0][3] = table[3][0] = Rat(1);  // N0 -- M1
    table[1][2] = table[2][1] = Rat(1);  // N1 -- M0
    table[1][3] = table[3][1] = Rat(1);  // N1 -- M1
    Capabilities caps;
    caps.symmetric = caps.binary = true;
    caps.binary01 = a.is_zero();
    caps.a = a;
    return table_instance(shape, std::move(table), std::move(caps), a);
}

Instance ef1_over_rounds_counterexample(const Rat& a) {
    const MarketShape shape{2, 2};
    auto low_matrix = [&] {
        ValueMatrix m = zero_matrix(4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if ((r < 2) != (c < 2)) m[r][c] = a;
        return m;
    };
    // t = 1: a directed like cycle N0 -> M0 -> N1 -> M1 -> N0.
    ValueMatrix t1 = low_matrix();
    t1[0][2] = Rat(1);  // N0 -> M0
    t1[2][1] = Rat(1);  // M0 -> N1
    t1[1][3] = Rat(1);  // N1 -> M1
    t1[3][0] = Rat(1);  // M1 -> N0
    // t = 2: N0 and M0 like each other; M0 also liked by N1, N0 by M1.
    ValueMatrix t2 = low_matrix();
    t2[0][2] = Rat(1);  // N0 -> M0
    t2[2][0] = Rat(1);  // M0 -> N0
    t2[1][2] = Rat(1);  // N1 -> M0
    t2[3][0] = Rat(1);  // M1 -> N0
    Capabilities caps;
    caps.binary = true;
    caps.binary01 = a.is_zero();
    caps.a = a;

    Instance inst;
    inst.shape = shape;
    inst.a = a;
    inst.valuation = std::make_shared<ScriptedValuation>(
        shape, std::vector<ValueMatrix>{std::move(t1), std::move(t2)}, std::move(caps));
    return inst;
}

Instance max_weight_counterexample() {
    const MarketShape shape{3, 3};
    // Agents: N0, N1, N2 and M0, M1, M2. N0 and N1 are identical twins.
    ValueMatrix table = zero_matrix(6);
    table[0][4] = Rat(1);  // N0 -> M1
    table[1][4] = Rat(1);  // N1 -> M1
    table[4][2] = Rat(1);  // M1 -> N2
    table[2][5] = Rat(1);  // N2 -> M2
    table[5][0] = Rat(1);  // M2 -> N0
    table[5][1] = Rat(1);  // M2 -> N1
    table[3][0] = Rat(1);  // M0 -> N0
    table[3][1] = Rat(1);  // M0 -> N1
    Capabilities caps;
    caps.binary = caps.binary01 = true;
    caps.a = Rat(0);
    return table_instance(shape, std::move(table), std::move(caps), Rat(0));
}

CounterexampleReport reproduce_ef1_over_rounds_counterexample() {
    CounterexampleReport report;
    report.search = exhaustive_sequence_search(ef1_over_rounds_counterexample(Rat(0)), 2,
                                               SearchConstraint::AnyPerfect,
                                               SearchProperty::Ef1EachRound);
    for (const Rat& a : {Rat(1, 4), Rat(1, 2)}) {
        const auto swept = exhaustive_sequence_search(ef1_over_rounds_counterexample(a), 2,
                                                      SearchConstraint::AnyPerfect,
                                                      SearchProperty::Ef1EachRound);
        report.sweep.push_back({a, swept.exists, swept.closed_branches});
    }
    return report;
}

CounterexampleReport reproduce_max_weight_counterexample(bool require_max_weight) {
    const Instance instance = max_weight_counterexample();
    CounterexampleReport report;
    report.round_optimum =
        matching::brute_force_max_weight(
            matching::RoundWeights::from_oracle(*instance.valuation, 1))
            .weight;

    // On surviving prefixes of even length 2r: M1 is indifferent between
    // her own bundle and M2's, and the envy of the twins N0, N1 toward N2
    // has grown to exactly r in total.
    PrefixHook claims = [&](const SimState& state, int t) {
        if (t % 2 != 0) return;
        ++report.claims_checked;
        const auto& v = state.values;
        if (v.value_of(agent_m(1), agent_m(1)) != v.value_of(agent_m(1), agent_m(2)))
            report.claims_hold = false;
        const Rat twins_gap = (v.value_of(agent_n(0), agent_n(2)) -
                               v.value_of(agent_n(0), agent_n(0))) +
                              (v.value_of(agent_n(1), agent_n(2)) -
                               v.value_of(agent_n(1), agent_n(1)));
        if (twins_gap != Rat(t / 2)) report.claims_hold = false;
    };

    report.search = exhaustive_sequence_search(
        instance, 6,
        require_max_weight ? SearchConstraint::MaxWeightOnly : SearchConstraint::AnyPerfect,
        SearchProperty::Ef1EachRound, require_max_weight ? claims : PrefixHook{});
    return report;
}

}  // namespace fairmatch::oracle
