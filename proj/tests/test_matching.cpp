#include <doctest.h>

#include "fairmatch/matching.hpp"
#include "fairmatch/oracle.hpp"
#include "support/helpers.hpp"

using namespace fairmatch;
using namespace testsupport;

namespace {

RoundMatching round_of(std::vector<int> partner, int t = 1) {
    RoundMatching x;
    x.t = t;
    x.partner = std::move(partner);
    return x;
}

matching::RoundWeights weights_of(const Instance& inst, int t = 1) {
    return matching::RoundWeights::from_oracle(*inst.valuation, t);
}

/// Random rational weights with small numerators/denominators.
matching::RoundWeights random_weights(int n, Rng& rng) {
    matching::RoundWeights rw;
    rw.t = 1;
    rw.n = n;
    rw.w.assign(n, std::vector<Rat>(n));
    for (auto& row : rw.w)
        for (auto& cell : row)
            cell = Rat(static_cast<int>(rng.below(9)), 1 + static_cast<int>(rng.below(3)));
    return rw;
}

Instance random_symmetric_binary(int n, const Rat& a, Rng& rng, int like_percent = 50) {
    ValueMatrix table = zeros(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            set_mutual(table, n, i, k, rng.chance_percent(like_percent) ? Rat(1) : a);
    Capabilities caps;
    caps.symmetric = caps.binary = true;
    caps.binary01 = a.is_zero();
    caps.a = a;
    return table_instance(n, n, std::move(table), caps, a);
}

}  // namespace

TEST_SUITE("matching") {
    TEST_CASE("matching weight: zeros, the 2x2 demo, and the 3x3 counterexample") {
        Capabilities caps;
        const Instance silent = table_instance(3, 3, zeros(3, 3), caps);
        CHECK(matching_weight(weights_of(silent), round_of({0, 1, 2})) == Rat(0));

        for (const Rat& a : {Rat(0), Rat(1, 2)}) {
            const Instance demo = oracle::envy_cycle_demo_instance(a);
            CHECK(matching_weight(weights_of(demo), round_of({0, 1})) == a + Rat(1));
            CHECK(matching_weight(weights_of(demo), round_of({1, 0})) == Rat(2));
        }

        const Instance counter = oracle::max_weight_counterexample();
        CHECK(matching_weight(weights_of(counter), round_of({0, 1, 2})) == Rat(3, 2));

        CHECK_THROWS_AS((void)matching_weight(weights_of(silent), round_of({0, 0, 1})),
                        UsageError);
    }

    TEST_CASE("good edges: empty at all-a, the demo matchings, and the weight identity") {
        Rng rng(11);
        const Instance all_low = random_symmetric_binary(3, Rat(1, 2), rng, 0);
        CHECK(matching::good_edges(*all_low.valuation, 1, round_of({0, 1, 2})).size() == 0);

        const Instance demo = oracle::envy_cycle_demo_instance(Rat(1, 2));
        const auto crossed = matching::good_edges(*demo.valuation, 1, round_of({1, 0}));
        CHECK(crossed.size() == 2);
        CHECK(crossed.edges ==
              std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
        // The identity matching keeps only the liked pairing N1-M1.
        CHECK(matching::good_edges(*demo.valuation, 1, round_of({0, 1})).size() == 1);

        // Weight identity against the good-edge count, for several a.
        for (const Rat& a : {Rat(0), Rat(1, 3)}) {
            const Instance inst = oracle::envy_cycle_demo_instance(a);
            for (const auto& partner : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
                const auto x = round_of(partner);
                const int good = matching::good_edges(*inst.valuation, 1, x).size();
                CHECK(matching_weight(weights_of(inst), x) ==
                      Rat(good) + a * Rat(2 - good));
            }
        }

        // Capability gate: asymmetric profiles are rejected.
        ValueMatrix asym = zeros(2, 2);
        set_nm(asym, 2, 0, 0, Rat(1));
        Capabilities caps;
        const Instance bad = table_instance(2, 2, asym, caps);
        CHECK_THROWS_AS((void)matching::good_edges(*bad.valuation, 1, round_of({0, 1})),
                        CapabilityError);
    }

    TEST_CASE("general solver: identity-favoring weights, the demo, the counterexample") {
        const int n = 4;
        matching::RoundWeights identity;
        identity.t = 1;
        identity.n = n;
        identity.w.assign(n, std::vector<Rat>(n, Rat(0)));
        for (int i = 0; i < n; ++i) identity.w[i][(i + 1) % n] = Rat(1);
        const auto best = matching::max_weight_matching_general(identity);
        CHECK(best.weight == Rat(n));
        for (int i = 0; i < n; ++i) CHECK(best.matching.partner[i] == (i + 1) % n);

        const Instance demo = oracle::envy_cycle_demo_instance(Rat(1, 2));
        const auto demo_best = matching::max_weight_matching_general(weights_of(demo));
        CHECK(demo_best.weight == Rat(2));
        CHECK(demo_best.matching.partner == std::vector<int>{1, 0});

        const Instance counter = oracle::max_weight_counterexample();
        CHECK(matching::max_weight_matching_general(weights_of(counter)).weight == Rat(3, 2));
    }

    TEST_CASE("general solver equals brute force on random rational weights") {
        for (std::uint64_t seed = 0; seed < 120; ++seed) {
            Rng rng(seed * 101 + 3);
            const int n = 2 + static_cast<int>(rng.below(5));  // 2..6
            const auto weights = random_weights(n, rng);
            const auto fast = matching::max_weight_matching_general(weights);
            const auto slow = matching::brute_force_max_weight(weights);
            CHECK(fast.weight == slow.weight);
            CHECK(matching_weight(weights, fast.matching) == fast.weight);
        }
    }

    TEST_CASE("binary fast path: all-ones, the demo, random equivalence") {
        Rng rng(77);
        const Instance all_ones = random_symmetric_binary(3, Rat(0), rng, 100);
        const auto x = matching::max_weight_matching_binary_symmetric(*all_ones.valuation, 1,
                                                                      all_ones.shape);
        CHECK(matching::good_edges(*all_ones.valuation, 1, x).size() == 3);

        const Instance demo = oracle::envy_cycle_demo_instance(Rat(1, 2));
        const auto crossed =
            matching::max_weight_matching_binary_symmetric(*demo.valuation, 1, demo.shape);
        CHECK(matching::good_edges(*demo.valuation, 1, crossed).size() == 2);

        for (std::uint64_t seed = 0; seed < 120; ++seed) {
            Rng inner(seed ^ 0xfeed);
            const int n = 2 + static_cast<int>(inner.below(5));
            const Rat a(static_cast<int>(inner.below(2)), 2);  // 0 or 1/2
            const Instance inst = random_symmetric_binary(n, a, inner,
                                                          20 + static_cast<int>(inner.below(61)));
            const auto weights = weights_of(inst);
            const auto quick =
                matching::max_weight_matching_binary_symmetric(*inst.valuation, 1, inst.shape);
            const auto exact = matching::brute_force_max_weight(weights);
            CHECK(matching_weight(weights, quick) == exact.weight);

            // The weight identity holds for the produced matching.
            const int good = matching::good_edges(*inst.valuation, 1, quick).size();
            CHECK(exact.weight == Rat(good) + a * Rat(n - good));
        }
    }

    TEST_CASE("enumeration yields exactly n! distinct matchings") {
        for (int n : {1, 2, 3}) {
            std::vector<std::vector<int>> seen;
            matching::enumerate_perfect_matchings(
                {n, n}, [&](const RoundMatching& x) { seen.push_back(x.partner); });
            int factorial = 1;
            for (int q = 2; q <= n; ++q) factorial *= q;
            CHECK(static_cast<int>(seen.size()) == factorial);
            std::sort(seen.begin(), seen.end());
            CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
        }
        CHECK_THROWS_AS(matching::enumerate_perfect_matchings({9, 9}, [](const auto&) {}),
                        GuardError);
    }

    TEST_CASE("deterministic: the general solver returns the same matching twice") {
        Rng rng(31337);
        const auto weights = random_weights(5, rng);
        const auto first = matching::max_weight_matching_general(weights);
        const auto second = matching::max_weight_matching_general(weights);
        CHECK(first.matching.partner == second.matching.partner);
    }
}
