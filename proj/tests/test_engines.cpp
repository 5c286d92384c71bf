#include <doctest.h>

#include <sstream>

#include "fairmatch/engines.hpp"
#include "fairmatch/gen.hpp"
#include "fairmatch/oracle.hpp"
#include "fairmatch/trace.hpp"
#include "support/helpers.hpp"

using namespace fairmatch;
using namespace testsupport;

namespace {

Instance all_ones(int n) {
    ValueMatrix table = zeros(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) set_mutual(table, n, i, k, Rat(1));
    Capabilities caps;
    caps.symmetric = caps.binary = caps.binary01 = true;
    caps.a = Rat(0);
    return table_instance(n, n, std::move(table), caps, Rat(0));
}

Trace run_to_trace(engines::Engine& engine, int steps) {
    Trace trace;
    trace.engine = std::string(engine.name());
    trace.mode = trace_mode_of(engine.mode());
    for (int s = 0; s < steps; ++s) trace.records.push_back(Trace::record_from(engine.step()));
    return trace;
}

}  // namespace

TEST_SUITE("engines") {
    TEST_CASE("rounds engine: all-ones market confirms with zero swaps") {
        engines::SymBinRoundEngine engine(all_ones(4), {});
        for (int t = 1; t <= 3; ++t) {
            const auto report = engine.step();
            CHECK(report.t == t);
            CHECK(report.iterations == 0);
            CHECK(report.weight == Rat(4));
            CHECK(report.ef1);
            CHECK(*report.envy_bounded);
            CHECK(report.envy_cycle_free == true);
        }
    }

    TEST_CASE("rounds engine: the swap demo performs exactly one swap at t=2") {
        engines::SymBinRoundEngine engine(oracle::swap_demo_instance(), {});
        const auto first = engine.step();
        CHECK(first.iterations == 0);
        CHECK(first.events == std::vector<MatchEvent>{{1, 0, 0}, {1, 1, 1}});

        const auto second = engine.step();
        CHECK(second.iterations == 1);
        // After the swap the confirmed matching is crossed: N0-M1, N1-M0.
        CHECK(second.events == std::vector<MatchEvent>{{2, 0, 1}, {2, 1, 0}});
        CHECK(second.ef1);
        CHECK(*second.envy_bounded);
        CHECK(second.envy_cycle_free == true);
    }

    TEST_CASE("rounds engine: confirmed weight always equals the exact optimum") {
        gen::GeneratorSpec spec;
        spec.kind = gen::InstanceKind::SymmetricBinary;
        spec.n = spec.m = 5;
        spec.like_density = 0.5;
        spec.seed = 99;
        spec.dynamics = gen::Dynamics::RedrawEachStep;
        const Instance instance = gen::generate(spec);
        engines::SymBinRoundEngine engine(instance, {});
        for (int t = 1; t <= 25; ++t) {
            const auto report = engine.step();
            const auto weights = matching::RoundWeights::from_oracle(*instance.valuation, t);
            CHECK(*report.weight == matching::max_weight_matching_general(weights).weight);
            CHECK(report.iterations <= 2 * 5 * 5);
            CHECK(report.ef1);
        }
    }

    TEST_CASE("rounds engine: traces replay cleanly through the verifier") {
        for (auto dynamics : {gen::Dynamics::Static, gen::Dynamics::FlipKPerStep}) {
            gen::GeneratorSpec spec;
            spec.kind = gen::InstanceKind::SymmetricBinary;
            spec.n = spec.m = 5;
            spec.like_density = 0.4;
            spec.seed = 1234;
            spec.dynamics = dynamics;
            spec.a = Rat(1, 2);
            const Instance instance = gen::generate(spec);

            engines::SymBinRoundEngine engine(instance, {});
            Trace trace = run_to_trace(engine, 30);
            trace.a = instance.a;
            CHECK(oracle::verify_trace(instance, trace, "rounds").ok);
        }
    }

    TEST_CASE("rounds engine: capability gates") {
        // Rectangular markets are rejected.
        Capabilities caps;
        caps.symmetric = caps.binary = true;
        caps.a = Rat(0);
        CHECK_THROWS_AS(engines::SymBinRoundEngine(
                            table_instance(2, 3, zeros(2, 3), caps, Rat(0)), {}),
                        CapabilityError);

        // Missing a.
        Capabilities plain;
        plain.symmetric = true;
        CHECK_THROWS_AS(
            engines::SymBinRoundEngine(table_instance(2, 2, zeros(2, 2), plain), {}),
            CapabilityError);

        // Asymmetric values are caught at the offending timestep.
        ValueMatrix asym = zeros(2, 2);
        set_nm(asym, 2, 0, 0, Rat(1));
        Capabilities declared;
        declared.symmetric = declared.binary = true;
        declared.a = Rat(0);
        engines::SymBinRoundEngine engine(table_instance(2, 2, asym, declared, Rat(0)), {});
        CHECK_THROWS_AS((void)engine.step(), CapabilityError);
    }

    TEST_CASE("desire engine: symmetric market, first step confirms the proposed edge") {
        gen::GeneratorSpec spec;
        spec.kind = gen::InstanceKind::SymmetricBinary;
        spec.n = spec.m = 3;
        spec.like_density = 0.7;
        spec.seed = 5;
        const Instance instance = gen::generate(spec);
        engines::AsymCyclesEngine engine(instance, {});
        const auto report = engine.step();
        CHECK(report.iterations == 0);
        REQUIRE(report.events.size() == 1);
        CHECK(engine.desire_graph().has_edge(report.events[0].n_index,
                                             report.events[0].m_index));
        CHECK(report.ef1);
    }

    TEST_CASE("desire engine: a repeated proposal is stolen by the starved agent") {
        // Both N-agents like M0 (mutually). Always proposing (N0, M0)
        // starves N1 until her gap exceeds 1 and she takes the slot.
        engines::EngineConfig config;
        config.initial_edge = engines::EdgePolicy::Lexicographic;
        engines::AsymCyclesEngine engine(oracle::swap_demo_instance(), config);

        const auto first = engine.step();
        CHECK(first.iterations == 0);
        CHECK(first.events == std::vector<MatchEvent>{{1, 0, 0}});

        const auto second = engine.step();
        CHECK(second.iterations == 1);
        CHECK(second.events == std::vector<MatchEvent>{{2, 1, 0}});
        CHECK(second.ef1);
        CHECK(second.envy_cycle_free == true);

        // Round-robin proposals reach the same alternation with no steals.
        engines::AsymCyclesEngine fair(oracle::swap_demo_instance(), {});
        CHECK(fair.step().events == std::vector<MatchEvent>{{1, 0, 0}});
        const auto alternated = fair.step();
        CHECK(alternated.events == std::vector<MatchEvent>{{2, 1, 0}});
        CHECK(alternated.iterations == 0);
    }

    TEST_CASE("desire engine: asymmetric star stays EF1 for 20 steps") {
        ValueMatrix star = zeros(2, 3);
        set_nm(star, 2, 0, 0, Rat(1));  // N0 likes M0
        set_mn(star, 2, 0, 1, Rat(1));  // M1 likes N0
        set_mn(star, 2, 0, 2, Rat(1));  // M2 likes N0
        Capabilities caps;
        caps.binary = caps.binary01 = true;
        caps.a = Rat(0);
        const Instance instance = table_instance(2, 3, std::move(star), caps, Rat(0));

        engines::AsymCyclesEngine engine(instance, {});
        for (int t = 1; t <= 20; ++t) {
            const auto report = engine.step();
            CHECK(report.ef1);
            CHECK(report.envy_cycle_free == true);
            CHECK(report.iterations <= 2 + 3);
        }
    }

    TEST_CASE("desire engine: rejects asymmetric cycles and non-binary01 profiles") {
        CHECK_THROWS_AS(engines::AsymCyclesEngine(oracle::max_weight_counterexample(), {}),
                        CapabilityError);
        CHECK_THROWS_AS(engines::AsymCyclesEngine(oracle::envy_cycle_demo_instance(Rat(1, 2)), {}),
                        CapabilityError);
    }

    TEST_CASE("desire engine: an empty desire graph produces no-op steps") {
        Capabilities caps;
        caps.binary = caps.binary01 = true;
        caps.a = Rat(0);
        engines::AsymCyclesEngine engine(table_instance(2, 2, zeros(2, 2), caps, Rat(0)), {});
        const auto report = engine.step();
        CHECK(report.events.empty());
        CHECK(report.ef1);
        CHECK(engine.state().current_t() == 1);
    }

    TEST_CASE("round robin: picks follow the recorded order, flipped in phase two") {
        // N0 prefers M0 then M2; N1 prefers M1 among what remains.
        ValueMatrix table = zeros(2, 3);
        set_nm(table, 2, 0, 0, Rat(5));
        set_nm(table, 2, 0, 1, Rat(1));
        set_nm(table, 2, 0, 2, Rat(4));
        set_nm(table, 2, 1, 0, Rat(9));
        set_nm(table, 2, 1, 1, Rat(3));
        set_nm(table, 2, 1, 2, Rat(1));
        Capabilities caps;
        const Instance instance = table_instance(2, 3, std::move(table), caps);

        engines::RoundRobinEngine engine(instance, {});
        std::vector<MatchEvent> confirmed;
        for (int t = 1; t <= 3; ++t) {
            const auto report = engine.step();
            confirmed.insert(confirmed.end(), report.events.begin(), report.events.end());
        }
        CHECK(engine.sigma() ==
              std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {0, 2}});
        // Cumulative bundles after phase one: N0 holds {M0, M2}, N1 {M1}.
        const auto& history = engine.state().history;
        REQUIRE(history.bundle(agent_n(0)).size() == 2);
        CHECK(history.bundle(agent_n(0))[0].partner == 0);
        CHECK(history.bundle(agent_n(0))[1].partner == 2);
        REQUIRE(history.bundle(agent_n(1)).size() == 1);
        CHECK(history.bundle(agent_n(1))[0].partner == 1);

        // Phase two replays M0, M1, M2 against the other pickers 1, 0, 1.
        std::vector<MatchEvent> phase_two;
        for (int t = 4; t <= 6; ++t) {
            const auto report = engine.step();
            CHECK(report.ef1);
            phase_two.insert(phase_two.end(), report.events.begin(), report.events.end());
        }
        CHECK(phase_two == std::vector<MatchEvent>{{4, 1, 0}, {5, 0, 1}, {6, 1, 2}});

        // Stage boundary: each N-agent met each M-agent once; exactly
        // envy-free on both sides.
        CHECK(engine.at_stage_boundary());
        CHECK(envy::is_c_envy_bounded(engine.state().values, Rat(0)).bounded);
    }

    TEST_CASE("round robin: a single M-agent forces alternation") {
        ValueMatrix table = zeros(2, 1);
        set_nm(table, 2, 0, 0, Rat(7, 2));
        set_nm(table, 2, 1, 0, Rat(1, 3));
        Capabilities caps;
        const Instance instance = table_instance(2, 1, std::move(table), caps);
        engines::RoundRobinEngine engine(instance, {});
        const auto first = engine.step();
        const auto second = engine.step();
        CHECK(first.events == std::vector<MatchEvent>{{1, 0, 0}});
        CHECK(second.events == std::vector<MatchEvent>{{2, 1, 0}});
        CHECK(engine.at_stage_boundary());
        CHECK(envy::is_c_envy_bounded(engine.state().values, Rat(0)).bounded);
    }

    TEST_CASE("round robin: the two-by-two worked example is EF1 at every step") {
        ValueMatrix table = zeros(2, 2);
        set_nm(table, 2, 0, 0, Rat(3));
        set_nm(table, 2, 0, 1, Rat(1));
        set_nm(table, 2, 1, 0, Rat(5));
        set_nm(table, 2, 1, 1, Rat(2));
        Capabilities caps;
        const Instance instance = table_instance(2, 2, std::move(table), caps);
        engines::RoundRobinEngine engine(instance, {});

        std::vector<MatchEvent> confirmed;
        for (int t = 1; t <= 4; ++t) {
            const auto report = engine.step();
            CHECK(report.ef1);
            confirmed.insert(confirmed.end(), report.events.begin(), report.events.end());
        }
        CHECK(confirmed == std::vector<MatchEvent>{{1, 0, 0}, {2, 1, 1}, {3, 1, 0}, {4, 0, 1}});
        CHECK(engine.at_stage_boundary());
    }

    TEST_CASE("round robin: ties break toward the lowest index; shape is enforced") {
        ValueMatrix table = zeros(2, 2);
        set_nm(table, 2, 0, 0, Rat(1));
        set_nm(table, 2, 0, 1, Rat(1));  // tie for N0
        Capabilities caps;
        const Instance instance = table_instance(2, 2, table, caps);
        engines::RoundRobinEngine engine(instance, {});
        CHECK(engine.step().events == std::vector<MatchEvent>{{1, 0, 0}});

        CHECK_THROWS_AS(engines::RoundRobinEngine(all_ones(3), {}), UsageError);

        ValueMatrix negative = zeros(2, 2);
        set_nm(negative, 2, 0, 0, Rat(-1));
        CHECK_THROWS_AS(engines::RoundRobinEngine(table_instance(2, 2, negative, caps), {}),
                        CapabilityError);
    }

    TEST_CASE("an a override supplies the low value an instance never declared") {
        // Values lie in {1/2, 1} but the instance declares no binary
        // capability and no a; the config override makes it runnable.
        ValueMatrix table = zeros(2, 2);
        set_mutual(table, 2, 0, 0, Rat(1));
        set_mutual(table, 2, 0, 1, Rat(1, 2));
        set_mutual(table, 2, 1, 0, Rat(1, 2));
        set_mutual(table, 2, 1, 1, Rat(1));
        Capabilities caps;
        caps.symmetric = true;
        const Instance instance = table_instance(2, 2, std::move(table), caps);

        engines::EngineConfig config;
        config.a = Rat(1, 2);
        engines::SymBinRoundEngine engine(instance, config);
        for (int t = 1; t <= 4; ++t) {
            const auto report = engine.step();
            CHECK(report.ef1);
            CHECK(*report.weight == Rat(2));
        }

        // A wrong override is caught by the per-step value scan.
        engines::EngineConfig wrong;
        wrong.a = Rat(1, 3);
        engines::SymBinRoundEngine rejected(instance, wrong);
        CHECK_THROWS_AS((void)rejected.step(), CapabilityError);
    }

    TEST_CASE("resume-scan policy keeps every guarantee") {
        // The proofs hold for any violating-pair order; the resume scan
        // must therefore verify just like the lexicographic one.
        engines::EngineConfig config;
        config.scan = engines::ScanPolicy::FirstFoundDfs;
        for (std::uint64_t seed : {3ULL, 8ULL, 21ULL}) {
            gen::GeneratorSpec spec;
            spec.kind = gen::InstanceKind::SymmetricBinary;
            spec.n = spec.m = 6;
            spec.like_density = 0.3;
            spec.seed = seed;
            spec.dynamics = gen::Dynamics::FlipKPerStep;
            spec.flip_k = 3;
            const Instance instance = gen::generate(spec);

            engines::SymBinRoundEngine engine(instance, config);
            Trace trace = run_to_trace(engine, 25);
            trace.a = instance.a;
            CHECK(oracle::verify_trace(instance, trace, "rounds").ok);
        }

        engines::AsymCyclesEngine stealer(oracle::swap_demo_instance(), config);
        for (int t = 0; t < 8; ++t) CHECK(stealer.step().ef1);
    }

    TEST_CASE("factory maps names; traces are byte-identical across runs") {
        CHECK_THROWS_AS(engines::make_engine("nope", all_ones(2), {}), UsageError);

        gen::GeneratorSpec spec;
        spec.kind = gen::InstanceKind::SymmetricBinary;
        spec.n = spec.m = 4;
        spec.like_density = 0.5;
        spec.seed = 2024;
        spec.dynamics = gen::Dynamics::RedrawEachStep;

        std::array<std::string, 2> text;
        for (auto& slot : text) {
            const Instance instance = gen::generate(spec);
            auto engine = engines::make_engine("sym-bin", instance, {});
            Trace trace = run_to_trace(*engine, 20);
            trace.a = instance.a;
            std::ostringstream out;
            trace.write(out);
            slot = out.str();
        }
        CHECK(text[0] == text[1]);
    }
}
