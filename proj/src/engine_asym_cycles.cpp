#include "fairmatch/engines.hpp"

namespace fairmatch::engines {

AsymCyclesEngine::AsymCyclesEngine(Instance instance, EngineConfig config)
    : instance_(std::move(instance)),
      config_(config),
      state_(instance_.shape, HistoryMode::PerMatch) {
    const Valuation& oracle = *instance_.valuation;
    RequiredCapabilities req;
    req.is_static = true;
    req.binary01 = true;
    if (auto check = validate_oracle(oracle, 1, req); !check)
        throw CapabilityError("desire-edge engine needs a static binary01 profile: " +
                              check.what);

    desire_ = envy::build_desire_graph(oracle);
    if (auto check = envy::only_symmetric_cycles(desire_); !check.ok)
        throw CapabilityError("desire graph has an asymmetric edge on a cycle: " +
                              to_string(check.witness->first) + " -- " +
                              to_string(check.witness->second));

    const MarketShape shape = instance_.shape;
    likes_n_.assign(shape.n, std::vector<bool>(shape.m, false));
    likes_m_.assign(shape.m, std::vector<bool>(shape.n, false));
    for (int i = 0; i < shape.n; ++i)
        for (int k = 0; k < shape.m; ++k) {
            likes_n_[i][k] = oracle.value(1, agent_n(i), agent_m(k)).is_one();
            likes_m_[k][i] = oracle.value(1, agent_m(k), agent_n(i)).is_one();
            if (desire_.has_edge(i, k)) desire_edges_.emplace_back(i, k);
        }
}

StepReport AsymCyclesEngine::step() {
    const MarketShape shape = instance_.shape;
    const int t = state_.current_t() + 1;
    const Valuation& oracle = *instance_.valuation;

    StepReport report;
    report.t = t;

    if (desire_edges_.empty()) {
        // Nobody values anybody: confirm an empty step rather than invent a
        // zero-value pairing outside the desire graph.
        state_.apply(oracle, {});
        if (config_.compute_verdicts) {
            const Verdicts v = compute_verdicts(state_, oracle, Rat(1), true);
            report.ef1 = v.ef1;
            report.envy_cycle_free = v.envy_cycle_free;
            report.envy_bounded = v.envy_bounded;
        }
        return report;
    }

    const auto proposal = config_.initial_edge == EdgePolicy::RoundRobin
                              ? desire_edges_[rr_cursor_++ % desire_edges_.size()]
                              : desire_edges_.front();
    int tentative_n = proposal.first;
    int tentative_m = proposal.second;

    // Cumulative gap of an envier toward the tentative participant on her
    // side, including the tentative match. Values are 0/1, so cumulative
    // values equal like counts.
    auto gap_against_tentative = [&](Side side, int envier) {
        const AgentId self{side, envier};
        if (side == Side::N) {
            const AgentId participant = agent_n(tentative_n);
            return state_.kappas.kappa(self, participant) + likes_n_[envier][tentative_m] -
                   state_.kappas.kappa(self, self);
        }
        const AgentId participant = agent_m(tentative_m);
        return state_.kappas.kappa(self, participant) + likes_m_[envier][tentative_n] -
               state_.kappas.kappa(self, self);
    };

    // While some agent's gap toward a tentative participant exceeds 1, the
    // envier takes that participant's slot. The envied slot can be on
    // either side of the market.
    const int max_iterations = shape.n + shape.m;
    const int agent_space = shape.n + shape.m;
    int iterations = 0;
    int cursor = 0;
    int clean_streak = 0;
    while (clean_streak < agent_space) {
        const int flat = cursor % agent_space;
        cursor = (cursor + 1) % agent_space;
        const Side side = flat < shape.n ? Side::N : Side::M;
        const int agent = side == Side::N ? flat : flat - shape.n;
        const int participant = side == Side::N ? tentative_n : tentative_m;
        if (agent == participant || gap_against_tentative(side, agent) <= 1) {
            ++clean_streak;
            continue;
        }

        (side == Side::N ? tentative_n : tentative_m) = agent;
        ++iterations;
        if (iterations > max_iterations)
            throw std::logic_error("steal count exceeded n+m; precondition broken");
        clean_streak = 0;
        if (config_.scan == ScanPolicy::Lexicographic) cursor = 0;
    }

    const MatchEvent event{t, tentative_n, tentative_m};
    state_.apply(oracle, std::span(&event, 1));
    report.events = {event};
    report.iterations = iterations;
    if (config_.compute_verdicts) {
        const Verdicts v = compute_verdicts(state_, oracle, Rat(1), true);
        report.ef1 = v.ef1;
        report.envy_cycle_free = v.envy_cycle_free;
        report.envy_bounded = v.envy_bounded;
    }
    return report;
}

}  // namespace fairmatch::engines
