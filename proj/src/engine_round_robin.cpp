#include "fairmatch/engines.hpp"

namespace fairmatch::engines {

RoundRobinEngine::RoundRobinEngine(Instance instance, EngineConfig config)
    : instance_(std::move(instance)),
      config_(config),
      state_(instance_.shape, HistoryMode::PerMatch) {
    if (instance_.shape.n != 2)
        throw UsageError("the round-robin engine requires exactly two N-agents");
    const Valuation& oracle = *instance_.valuation;
    RequiredCapabilities req;
    req.is_static = true;
    if (auto check = validate_oracle(oracle, 1, req); !check)
        throw CapabilityError("round-robin engine needs a static profile: " + check.what);
    for (int i = 0; i < instance_.shape.n; ++i)
        for (int k = 0; k < instance_.shape.m; ++k) {
            if (oracle.value(1, agent_n(i), agent_m(k)).sign() < 0 ||
                oracle.value(1, agent_m(k), agent_n(i)).sign() < 0)
                throw CapabilityError("negative values must be clamped to 0 before ingestion");
        }
    for (int k = 0; k < instance_.shape.m; ++k) pool_.insert(k);
}

StepReport RoundRobinEngine::step() {
    const int t = state_.current_t() + 1;
    const Valuation& oracle = *instance_.valuation;

    int picker = 0;
    int picked = 0;
    if (phase_ == Phase::One) {
        // Pickers alternate starting from agent 0; each takes her favorite
        // agent remaining in the pool, ties to the lowest index.
        picker = static_cast<int>(sigma_.size()) % 2;
        Rat best(-1);
        for (int k : pool_) {
            const Rat v = oracle.value(t, agent_n(picker), agent_m(k));
            if (v > best) {
                best = v;
                picked = k;
            }
        }
        pool_.erase(picked);
        sigma_.emplace_back(picker, picked);
        if (pool_.empty()) {
            phase_ = Phase::Two;
            phase2_pos_ = 0;
        }
    } else {
        // Replay the pick order against the other N-agent, starting with
        // agent 1, so each M-agent meets the N-agent she missed in phase one.
        picker = static_cast<int>(1 + phase2_pos_) % 2;
        picked = sigma_[phase2_pos_].second;
        ++phase2_pos_;
        if (phase2_pos_ == sigma_.size()) {
            phase_ = Phase::One;
            sigma_.clear();
            for (int k = 0; k < instance_.shape.m; ++k) pool_.insert(k);
            ++stage_;
        }
    }

    const MatchEvent event{t, picker, picked};
    state_.apply(oracle, std::span(&event, 1));

    StepReport report;
    report.t = t;
    report.events = {event};
    if (config_.compute_verdicts) {
        const Verdicts v = compute_verdicts(state_, oracle, std::nullopt, false);
        report.ef1 = v.ef1;
        report.envy_cycle_free = v.envy_cycle_free;
    }
    return report;
}

}  // namespace fairmatch::engines
