#include <algorithm>

#include "fairmatch/engines.hpp"

namespace fairmatch::engines {

SymBinRoundEngine::SymBinRoundEngine(Instance instance, EngineConfig config)
    : instance_(std::move(instance)),
      config_(config),
      state_(instance_.shape, HistoryMode::PerRound) {
    if (!instance_.shape.square())
        throw CapabilityError("the rounds engine requires |N| = |M| (pad with dummy agents)");
    std::optional<Rat> a = config_.a ? config_.a : instance_.a;
    if (!a) throw CapabilityError("binary profile requires a low value a");
    if (a->sign() < 0 || *a >= Rat(1)) throw CapabilityError("a must lie in [0, 1)");
    a_ = *a;
}

/// One step's tentative matching plus the like matrix for its timestep.
/// Cumulative like-count gaps are evaluated as confirmed ledger plus a
/// one-round delta, so a swap re-prices only the four affected agents.
struct SymBinRoundEngine::TentativeScan {
    const KappaLedger& kappas;
    const std::vector<std::vector<bool>>& liked;  // [n][m], symmetric
    std::vector<int>& partner_of_n;               // tentative
    std::vector<int> partner_of_m;

    TentativeScan(const KappaLedger& kappas, const std::vector<std::vector<bool>>& liked,
                  std::vector<int>& partner)
        : kappas(kappas), liked(liked), partner_of_n(partner), partner_of_m(partner.size()) {
        for (int i = 0; i < static_cast<int>(partner.size()); ++i)
            partner_of_m[partner[i]] = i;
    }

    /// Does the observer like the subject's tentative partner? By symmetry
    /// the observer's value reduces to the like matrix.
    bool likes_partner_of(Side side, int observer, int subject) const {
        return side == Side::N ? liked[observer][partner_of_n[subject]]
                               : liked[partner_of_m[subject]][observer];
    }

    /// kappa_i(X_j^t) - kappa_i(X_i^t) including the tentative round.
    int kappa_gap(Side side, int i, int j) const {
        const AgentId ai{side, i};
        return kappas.kappa(ai, AgentId{side, j}) + likes_partner_of(side, i, j) -
               kappas.kappa(ai, ai) - likes_partner_of(side, i, i);
    }

    void swap(Side side, int i, int j) {
        int ni = i, nj = j;
        if (side == Side::M) {
            ni = partner_of_m[i];
            nj = partner_of_m[j];
        }
        std::swap(partner_of_n[ni], partner_of_n[nj]);
        partner_of_m[partner_of_n[ni]] = ni;
        partner_of_m[partner_of_n[nj]] = nj;
    }

    int good_edge_count() const {
        int count = 0;
        for (int i = 0; i < static_cast<int>(partner_of_n.size()); ++i)
            count += liked[i][partner_of_n[i]];
        return count;
    }
};

StepReport SymBinRoundEngine::step() {
    const int n = instance_.shape.n;
    const int t = state_.current_t() + 1;
    const Valuation& oracle = *instance_.valuation;

    // Validate the profile at this timestep and build the like matrix in
    // one scan: every value must be a or 1, and symmetric.
    std::vector<std::vector<bool>> liked(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Rat fwd = oracle.value(t, agent_n(i), agent_m(j));
            const Rat rev = oracle.value(t, agent_m(j), agent_n(i));
            if (fwd != rev)
                throw CapabilityError("asymmetric value at t=" + std::to_string(t) + " between " +
                                      to_string(agent_n(i)) + " and " + to_string(agent_m(j)));
            if (fwd.is_one())
                liked[i][j] = true;
            else if (fwd != a_)
                throw CapabilityError("value outside {a, 1} at t=" + std::to_string(t));
        }
    }

    // Inductive precondition: the confirmed state is (1-a)-envy-bounded
    // (kappa gaps at most 1; bundle sizes are equal in rounds mode) and
    // free of envy cycles.
    for (Side side : {Side::N, Side::M}) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && state_.kappas.kappa_gap(AgentId{side, i}, AgentId{side, j}) > 1)
                    throw std::logic_error("confirmed state lost the envy bound");
    }
    for (Side side : {Side::N, Side::M}) {
        if (has_envy_cycle(envy::build_envy_graph(state_.values, side)))
            throw std::logic_error("confirmed state acquired an envy cycle");
    }

    RoundMatching x = matching::max_weight_matching_on_likes(t, liked);
    TentativeScan scan(state_.kappas, liked, x.partner);

    const int max_iterations = 2 * n * n;
    int iterations = 0;
    int good_edges = scan.good_edge_count();

    // Violating pairs are rescanned per policy until none remain. A pair
    // violates when the envier's like-count gap reaches 2, the integer
    // form of v_i(X_j) - v_i(X_i) > 1 - a under equal bundle sizes.
    const int pair_space = 2 * n * n;
    int cursor = 0;
    int clean_streak = 0;
    while (clean_streak < pair_space) {
        const int flat = cursor % pair_space;
        cursor = (cursor + 1) % pair_space;
        const Side side = flat < n * n ? Side::N : Side::M;
        const int local = flat % (n * n);
        const int envier = local / n;
        const int envied = local % n;
        if (envier == envied || scan.kappa_gap(side, envier, envied) < 2) {
            ++clean_streak;
            continue;
        }

        // Conclusions of the swap analysis, asserted on every iteration:
        // the envier dislikes her tentative partner, likes the envied
        // agent's, and already envied her under the confirmed state.
        if (scan.likes_partner_of(side, envier, envier))
            throw std::logic_error("swapping envier likes her tentative partner");
        if (!scan.likes_partner_of(side, envier, envied))
            throw std::logic_error("swapping envier gains a disliked partner");
        if (state_.kappas.kappa_gap(AgentId{side, envier}, AgentId{side, envied}) <= 0)
            throw std::logic_error("swap without confirmed envy");

        scan.swap(side, envier, envied);
        ++iterations;

        const int new_good = scan.good_edge_count();
        if (new_good < good_edges)
            throw std::logic_error("swap decreased the good-edge count");
        good_edges = new_good;

        if (iterations > max_iterations)
            throw std::logic_error("swap count exceeded 2n^2; precondition broken");
        clean_streak = 0;
        if (config_.scan == ScanPolicy::Lexicographic) cursor = 0;
    }

    const auto events = x.events();
    state_.apply(oracle, events);

    StepReport report;
    report.t = t;
    report.events = events;
    report.iterations = iterations;
    report.weight = Rat(good_edges) + a_ * Rat(n - good_edges);
    if (config_.compute_verdicts) {
        const Verdicts v = compute_verdicts(state_, oracle, Rat(1) - a_, true);
        report.ef1 = v.ef1;
        report.envy_cycle_free = v.envy_cycle_free;
        report.envy_bounded = v.envy_bounded;
    }
    return report;
}

}  // namespace fairmatch::engines
