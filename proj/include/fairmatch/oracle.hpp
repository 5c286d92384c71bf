#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairmatch/instance.hpp"
#include "fairmatch/ledger.hpp"
#include "fairmatch/trace.hpp"

namespace fairmatch::oracle {

/// ---- Definitional evaluators ------------------------------------------
///
/// These recompute values straight from the timestamped history by direct
/// summation, with no incremental ledger state. They are deliberately a
/// second implementation path: the verifier never trusts the engines'
/// bookkeeping, it re-derives every verdict from the raw record.

/// v_i(X_j^t) = sum over occurrences (t', partner) in X_j of v_i^{t'}(partner).
Rat bundle_value(const MatchHistory& history, const Valuation& oracle, const AgentId& observer,
                 const AgentId& subject);

struct DefnFairness {
    bool ok = true;
    AgentId envier{Side::N, 0};
    AgentId envied{Side::N, 0};
};

/// Envy-freeness up to `removals` matches, by definition: whenever i
/// envies j, dropping the `removals` largest time-stamped contributions
/// from X_j must eliminate the envy. removals = 0 is exact envy-freeness.
DefnFairness ef_up_to(const MatchHistory& history, const Valuation& oracle, int removals);

/// ---- Trace verification -------------------------------------------------

struct VerifyReport {
    bool ok = true;
    int failed_t = 0;
    std::string what;        ///< first violated property, with the pair named
    std::string state_dump;  ///< cumulative values at the failure point

    explicit operator bool() const { return ok; }
};

/// Replays a trace against a fresh state and re-derives every per-step
/// property: EF1 on both sides, the mode's shape, and for rounds-engine
/// traces also weight optimality, (1-a)-envy-boundedness and
/// envy-cycle-freeness. Recorded weights and verdicts must agree with the
/// recomputed ones. Throws UsageError if `mode` contradicts the trace
/// header, ParseError on malformed content.
VerifyReport verify_trace(const Instance& instance, const Trace& trace, std::string_view mode);

/// ---- Exhaustive sequence search ----------------------------------------

enum class SearchConstraint {
    AnyPerfect,     ///< any perfect matching may be chosen each round
    MaxWeightOnly,  ///< only maximum-weight matchings (brute-force optimum)
};

enum class SearchProperty {
    Ef1EachRound,  ///< the cumulative matching must be EF1 after every round
};

struct SequenceSearchResult {
    bool exists = false;
    std::vector<RoundMatching> witness;  ///< passes the property at every t
    long explored = 0;                   ///< prefix states evaluated
    long closed_branches = 0;            ///< branches ended by violation or full depth
    int horizon = 0;
};

/// Called on every surviving prefix, after round t was applied.
using PrefixHook = std::function<void(const SimState&, int t)>;

/// Depth-first search over per-round matching choices, pruning any prefix
/// that violates the property (sound because the property is per-step).
/// Exact existence verdict for the bounded horizon. Guarded to square
/// markets with n <= 4 and horizon <= 8.
SequenceSearchResult exhaustive_sequence_search(const Instance& instance, int horizon,
                                                SearchConstraint constraint,
                                                SearchProperty property,
                                                const PrefixHook& hook = nullptr);

/// ---- Round-to-match expansion -------------------------------------------

struct ExpansionReport {
    bool ok = true;
    int failed_round = 0;
    std::string what;
};

/// Expands each round of a rounds-mode sequence into single-match steps in
/// every intra-round order (exhaustive for n <= 4, a fixed sample above)
/// and checks envy-freeness up to two matches at every intermediate point.
ExpansionReport ef2_over_time_expansion(const Instance& instance,
                                        const std::vector<RoundMatching>& rounds);

/// ---- Bundled counterexample instances ------------------------------------

/// 2x2 static symmetric binary (a = 0) instance on which the rounds engine
/// performs one tentative swap at t = 2 before confirming.
Instance swap_demo_instance();

/// 2x2 static symmetric binary instance with one low-value pairing; used
/// by the envy-cycle and matching-weight examples.
Instance envy_cycle_demo_instance(const Rat& a);

/// 2x2 scripted binary instance (values change between t = 1 and t = 2)
/// admitting no EF1-over-rounds sequence.
Instance ef1_over_rounds_counterexample(const Rat& a);

/// 3x3 static binary01 instance admitting no sequence that is both
/// EF1-over-rounds and per-step maximum weight.
Instance max_weight_counterexample();

/// ---- Counterexample reproductions ----------------------------------------

struct SweepEntry {
    Rat a;
    bool exists = false;
    long closed_branches = 0;
};

struct CounterexampleReport {
    SequenceSearchResult search;    ///< the a = 0 / constrained run
    std::vector<SweepEntry> sweep;  ///< additional low values, reported only
    bool claims_hold = true;        ///< invariants checked on surviving prefixes
    long claims_checked = 0;
    std::optional<Rat> round_optimum;  ///< per-round max weight (static profile)
};

/// Searches the dynamic-binary instance to horizon 2 at a = 0 (where no
/// EF1-over-rounds sequence exists) and additionally sweeps a in
/// {1/4, 1/2}, reporting those verdicts without asserting them.
CounterexampleReport reproduce_ef1_over_rounds_counterexample();

/// Searches the static-binary instance to horizon 6. With the max-weight
/// restriction no EF1 sequence exists, and on every surviving prefix at
/// even t = 2r two invariants hold: M1 values her own bundle and M2's
/// equally, and the envy gaps of N0 and N1 toward N2 sum to exactly r.
/// Without the restriction a witness exists.
CounterexampleReport reproduce_max_weight_counterexample(bool require_max_weight);

}  // namespace fairmatch::oracle
