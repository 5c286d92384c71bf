#include "fairmatch/engines.hpp"

namespace fairmatch::engines {

Verdicts compute_verdicts(const SimState& state, const Valuation& oracle,
                          const std::optional<Rat>& bound, bool check_cycles) {
    Verdicts v;
    v.ef1 = envy::is_ef1(state.history, state.values, oracle).ok;
    if (check_cycles)
        v.envy_cycle_free =
            !envy::has_envy_cycle(envy::build_envy_graph(state.values, Side::N)) &&
            !envy::has_envy_cycle(envy::build_envy_graph(state.values, Side::M));
    if (bound) v.envy_bounded = envy::is_c_envy_bounded(state.values, *bound).bounded;
    return v;
}

std::unique_ptr<Engine> make_engine(std::string_view name, Instance instance,
                                    EngineConfig config) {
    if (name == "sym-bin")
        return std::make_unique<SymBinRoundEngine>(std::move(instance), config);
    if (name == "asym-cycles")
        return std::make_unique<AsymCyclesEngine>(std::move(instance), config);
    if (name == "round-robin")
        return std::make_unique<RoundRobinEngine>(std::move(instance), config);
    throw UsageError("unknown engine: " + std::string(name));
}

}  // namespace fairmatch::engines
