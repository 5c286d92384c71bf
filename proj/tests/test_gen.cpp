#include <doctest.h>

#include <nlohmann/json.hpp>

#include "fairmatch/engines.hpp"
#include "fairmatch/envy.hpp"
#include "fairmatch/gen.hpp"
#include "fairmatch/oracle.hpp"
#include "support/helpers.hpp"

using namespace fairmatch;
using namespace testsupport;

namespace {

gen::GeneratorSpec sym_spec(int n, double p, std::uint64_t seed,
                            gen::Dynamics dynamics = gen::Dynamics::Static) {
    gen::GeneratorSpec spec;
    spec.kind = gen::InstanceKind::SymmetricBinary;
    spec.n = spec.m = n;
    spec.like_density = p;
    spec.seed = seed;
    spec.dynamics = dynamics;
    return spec;
}

}  // namespace

TEST_SUITE("gen") {
    TEST_CASE("identical specs materialize to identical documents") {
        for (auto dynamics : {gen::Dynamics::Static, gen::Dynamics::RedrawEachStep,
                              gen::Dynamics::FlipKPerStep}) {
            const auto spec = sym_spec(5, 0.4, 77, dynamics);
            const auto one = gen::materialize(gen::generate(spec), 8).to_json().dump();
            const auto two = gen::materialize(gen::generate(spec), 8).to_json().dump();
            CHECK(one == two);
        }
    }

    TEST_CASE("generated instances honor their declared capabilities at every step") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            for (auto dynamics : {gen::Dynamics::Static, gen::Dynamics::RedrawEachStep,
                                  gen::Dynamics::FlipKPerStep}) {
                auto spec = sym_spec(4, 0.5, seed, dynamics);
                spec.a = seed % 2 ? Rat(0) : Rat(1, 2);
                spec.flip_k = 2;
                const Instance inst = gen::generate(spec);
                RequiredCapabilities req;
                req.symmetric = true;
                req.binary = true;
                req.binary01 = inst.capabilities().binary01;
                for (int t = 1; t <= 6; ++t) CHECK(validate_oracle(*inst.valuation, t, req).ok);
            }
        }
    }

    TEST_CASE("only-symmetric-cycles output always passes the checker") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            gen::GeneratorSpec spec;
            spec.kind = gen::InstanceKind::OnlySymmetricCycles;
            spec.n = 4;
            spec.m = 4;
            spec.like_density = 0.6;
            spec.seed = seed;
            const Instance inst = gen::generate(spec);
            CHECK(envy::only_symmetric_cycles(envy::build_desire_graph(*inst.valuation)).ok);
        }
    }

    TEST_CASE("general-binary output violates the cycle condition for some seed") {
        int violations = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            gen::GeneratorSpec spec;
            spec.kind = gen::InstanceKind::GeneralBinary;
            spec.n = 4;
            spec.m = 4;
            spec.like_density = 0.6;
            spec.seed = seed;
            const Instance inst = gen::generate(spec);
            if (!envy::only_symmetric_cycles(envy::build_desire_graph(*inst.valuation)).ok)
                ++violations;
        }
        CHECK(violations > 0);
    }

    TEST_CASE("degenerate densities: p=0 stays put, p=1 never swaps") {
        auto empty = sym_spec(4, 0.0, 3);
        empty.a = Rat(1, 2);
        engines::SymBinRoundEngine silent(gen::generate(empty), {});
        for (int t = 0; t < 3; ++t) {
            const auto report = silent.step();
            CHECK(report.iterations == 0);
            CHECK(*report.weight == Rat(2));  // four pairings at a = 1/2
            CHECK(report.ef1);
        }

        engines::SymBinRoundEngine eager(gen::generate(sym_spec(4, 1.0, 3)), {});
        for (int t = 0; t < 3; ++t) {
            const auto report = eager.step();
            CHECK(report.iterations == 0);
            CHECK(*report.weight == Rat(4));
        }
    }

    TEST_CASE("padding: square input unchanged, rectangular gains zero dummies") {
        const Instance square = gen::generate(sym_spec(3, 0.5, 9));
        CHECK(gen::pad_to_square(square).shape == square.shape);

        gen::GeneratorSpec rect = sym_spec(2, 0.7, 11);
        rect.m = 3;
        const Instance padded = gen::pad_to_square(gen::generate(rect));
        CHECK(padded.shape == MarketShape{3, 3});
        for (int k = 0; k < 3; ++k) {
            CHECK(padded.valuation->value(1, agent_n(2), agent_m(k)) == Rat(0));
            CHECK(padded.valuation->value(1, agent_m(k), agent_n(2)) == Rat(0));
        }

        // Padding a binary instance with a nonzero low value cannot stay
        // in class; it is rejected.
        gen::GeneratorSpec off = sym_spec(2, 0.5, 12);
        off.m = 3;
        off.a = Rat(1, 2);
        CHECK_THROWS_AS(gen::pad_to_square(gen::generate(off)), CapabilityError);
    }

    TEST_CASE("padded instances run and verify; dummies never attract swaps") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            gen::GeneratorSpec rect = sym_spec(2, 0.6, seed * 13 + 1);
            rect.m = 3;
            const Instance padded = gen::pad_to_square(gen::generate(rect));

            auto engine = engines::make_engine("sym-bin", padded, {});
            Trace trace;
            trace.engine = "sym-bin";
            trace.mode = "rounds";
            trace.a = padded.a;
            for (int t = 1; t <= 8; ++t) {
                const auto report = engine->step();
                trace.records.push_back(Trace::record_from(report));
                // The dummy N-agent's matches carry weight 0: total weight
                // is the good-edge count among real agents only.
                for (const MatchEvent& e : report.events)
                    if (e.n_index == 2)
                        CHECK(padded.valuation->value(t, agent_n(2), agent_m(e.m_index)) ==
                              Rat(0));
            }
            CHECK(oracle::verify_trace(padded, trace, "rounds").ok);
        }
    }

    TEST_CASE("two-agent values stay within their advertised bounds") {
        gen::GeneratorSpec spec;
        spec.kind = gen::InstanceKind::TwoAgentAdditive;
        spec.n = 2;
        spec.m = 6;
        spec.seed = 5;
        const Instance inst = gen::generate(spec);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 6; ++k) {
                const Rat v = inst.valuation->value(1, agent_n(i), agent_m(k));
                CHECK(v.sign() >= 0);
                CHECK(v <= Rat(12));
                CHECK(v.den() <= 4);
            }
        spec.n = 3;
        CHECK_THROWS_AS(gen::generate(spec), UsageError);
    }

    TEST_CASE("spec validation") {
        auto spec = sym_spec(2, 1.5, 0);
        CHECK_THROWS_AS(gen::generate(spec), UsageError);
        spec = sym_spec(0, 0.5, 0);
        CHECK_THROWS_AS(gen::generate(spec), UsageError);
        spec = sym_spec(2, 0.5, 0);
        spec.kind = gen::InstanceKind::GeneralBinary;
        spec.dynamics = gen::Dynamics::RedrawEachStep;
        CHECK_THROWS_AS(gen::generate(spec), UsageError);
    }

    TEST_CASE("an adaptive adversary cannot break the rounds engine") {
        // The adversary watches the confirmed history and, each step,
        // inverts the likes of every pair matched in the previous round.
        const int n = 4;
        const MarketShape shape{n, n};
        auto history_slot = std::make_shared<const MatchHistory*>(nullptr);

        Capabilities caps;
        caps.symmetric = caps.binary = caps.binary01 = true;
        caps.a = Rat(0);
        auto supplier = [history_slot, n](int t) {
            ValueMatrix table(2 * n, std::vector<Rat>(2 * n, Rat(0)));
            auto base_like = [&](int i, int k) { return (i + k) % 2 == 0; };
            std::vector<std::vector<bool>> flip(n, std::vector<bool>(n, false));
            if (const MatchHistory* history = *history_slot; history && t >= 2) {
                for (const MatchEvent& e : history->groups()[t - 2])
                    flip[e.n_index][e.m_index] = true;
            }
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    if (base_like(i, k) != flip[i][k])
                        table[i][n + k] = table[n + k][i] = Rat(1);
            return table;
        };

        Instance instance;
        instance.shape = shape;
        instance.a = Rat(0);
        instance.valuation = std::make_shared<gen::AdaptiveValuation>(shape, caps, supplier);

        engines::SymBinRoundEngine engine(instance, {});
        *history_slot = &engine.state().history;
        for (int t = 1; t <= 15; ++t) {
            const auto report = engine.step();
            CHECK(report.ef1);
            CHECK(*report.envy_bounded);
            CHECK(report.envy_cycle_free == true);
        }
    }
}
