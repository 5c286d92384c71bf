#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "fairmatch/envy.hpp"
#include "fairmatch/instance.hpp"
#include "fairmatch/ledger.hpp"
#include "fairmatch/matching.hpp"

namespace fairmatch::engines {

/// How the while-loops pick the next violating pair. The correctness
/// guarantees hold for any order; a fixed order makes traces
/// byte-identical across runs.
enum class ScanPolicy {
    Lexicographic,  ///< rescan from the smallest envier after every change
    FirstFoundDfs,  ///< resume scanning cyclically from the last change
};

/// How the desire-edge engine proposes its initial pairing each step.
enum class EdgePolicy {
    RoundRobin,     ///< cycle through desire edges in fixed order
    Lexicographic,  ///< always propose the first desire edge
};

struct EngineConfig {
    ScanPolicy scan = ScanPolicy::Lexicographic;
    EdgePolicy initial_edge = EdgePolicy::RoundRobin;
    /// Report-only low value for binary engines; taken from the instance
    /// when unset.
    std::optional<Rat> a;
    /// Per-step fairness verdicts cost O(n^2 t); benchmarks switch them off.
    bool compute_verdicts = true;
};

/// Audit record for one engine step. The optional verdicts carry only
/// what the engine guarantees: the round-robin engine promises EF1 alone
/// (mid-stage envy cycles between M-agents are legitimate under general
/// additive values), the other two also promise an envy bound and
/// envy-cycle-freeness.
struct StepReport {
    int t = 0;
    std::vector<MatchEvent> events;
    std::optional<Rat> weight;              ///< rounds mode only
    int iterations = 0;                     ///< swaps or steals
    bool ef1 = true;
    std::optional<bool> envy_bounded;       ///< vs 1-a (or 1)
    std::optional<bool> envy_cycle_free;
};

/// Common stepping interface over the three engines. An engine owns one
/// simulation state and advances it one timestep per step() call.
class Engine {
public:
    virtual ~Engine() = default;

    virtual StepReport step() = 0;
    virtual const SimState& state() const = 0;
    virtual HistoryMode mode() const = 0;
    virtual std::string_view name() const = 0;
};

/// Perfect-matching engine for dynamic, symmetric, binary profiles.
/// Each step starts from a maximum-weight matching and swaps tentative
/// partners of any pair whose cumulative like-count gap would exceed 1,
/// then confirms. The confirmed matching stays maximum weight and the
/// cumulative matching stays (1-a)-envy-bounded, envy-cycle-free and EF1.
class SymBinRoundEngine final : public Engine {
public:
    SymBinRoundEngine(Instance instance, EngineConfig config);

    StepReport step() override;
    const SimState& state() const override { return state_; }
    HistoryMode mode() const override { return HistoryMode::PerRound; }
    std::string_view name() const override { return "sym-bin"; }

    const Rat& low_value() const { return a_; }

private:
    Instance instance_;
    EngineConfig config_;
    Rat a_;
    SimState state_;

    struct TentativeScan;
};

/// Single-match engine for static binary01 profiles whose desire graph has
/// only symmetric cycles. Each step proposes a desire edge and lets any
/// agent whose cumulative gap toward a tentative participant exceeds 1
/// steal that participant's slot; then the single match is confirmed.
class AsymCyclesEngine final : public Engine {
public:
    AsymCyclesEngine(Instance instance, EngineConfig config);

    StepReport step() override;
    const SimState& state() const override { return state_; }
    HistoryMode mode() const override { return HistoryMode::PerMatch; }
    std::string_view name() const override { return "asym-cycles"; }

    const envy::DesireGraph& desire_graph() const { return desire_; }

private:
    Instance instance_;
    EngineConfig config_;
    SimState state_;
    envy::DesireGraph desire_;
    std::vector<std::pair<int, int>> desire_edges_;  ///< lexicographic (n, m)
    std::size_t rr_cursor_ = 0;
    std::vector<std::vector<bool>> likes_n_;  ///< [n][m]: v_i(k) == 1
    std::vector<std::vector<bool>> likes_m_;  ///< [m][n]: v_k(i) == 1
};

/// Single-match engine for two N-agents and additive valuations, in stages
/// of 2m steps. Phase one: the two N-agents alternate picking their
/// favorite agent from the pool (starting with agent 0); phase two replays
/// the recorded pick order against the other N-agent (starting with agent
/// 1). Every stage matches each M-agent once to each N-agent, so the
/// cumulative matching is exactly envy-free at stage boundaries.
class RoundRobinEngine final : public Engine {
public:
    RoundRobinEngine(Instance instance, EngineConfig config);

    StepReport step() override;
    const SimState& state() const override { return state_; }
    HistoryMode mode() const override { return HistoryMode::PerMatch; }
    std::string_view name() const override { return "round-robin"; }

    int stage_index() const { return stage_; }
    bool at_stage_boundary() const { return phase_ == Phase::One && sigma_.empty(); }
    int steps_per_stage() const { return 2 * state_.history.shape().m; }

    /// The pick order of the running stage so far: (picker, picked).
    const std::vector<std::pair<int, int>>& sigma() const { return sigma_; }

private:
    enum class Phase { One, Two };

    Instance instance_;
    EngineConfig config_;
    SimState state_;
    int stage_ = 0;
    Phase phase_ = Phase::One;
    std::set<int> pool_;
    std::vector<std::pair<int, int>> sigma_;
    std::size_t phase2_pos_ = 0;
};

/// Builds the engine named by its CLI identifier: "sym-bin",
/// "asym-cycles" or "round-robin". Throws UsageError for unknown names and
/// CapabilityError when the instance does not satisfy the engine's
/// requirements.
std::unique_ptr<Engine> make_engine(std::string_view name, Instance instance,
                                    EngineConfig config);

/// Shared post-step verdict computation; the bound and cycle checks run
/// only for engines that promise them.
struct Verdicts {
    bool ef1 = true;
    std::optional<bool> envy_cycle_free;
    std::optional<bool> envy_bounded;
};

Verdicts compute_verdicts(const SimState& state, const Valuation& oracle,
                          const std::optional<Rat>& bound, bool check_cycles);

}  // namespace fairmatch::engines
