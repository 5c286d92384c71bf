#include "fairmatch/cli.hpp"

#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairmatch/engines.hpp"
#include "fairmatch/gen.hpp"
#include "fairmatch/oracle.hpp"
#include "fairmatch/trace.hpp"

namespace fairmatch::cli {

namespace {

struct CommandError {
    int code;
    std::string message;
};

gen::InstanceKind parse_kind(const std::string& name) {
    if (name == "symmetric-binary") return gen::InstanceKind::SymmetricBinary;
    if (name == "only-symmetric-cycles") return gen::InstanceKind::OnlySymmetricCycles;
    if (name == "two-agent-additive") return gen::InstanceKind::TwoAgentAdditive;
    if (name == "general-binary") return gen::InstanceKind::GeneralBinary;
    throw CommandError{kExitUsage, "unknown instance kind: " + name};
}

gen::Dynamics parse_dynamics(const std::string& name) {
    if (name == "static") return gen::Dynamics::Static;
    if (name == "redraw") return gen::Dynamics::RedrawEachStep;
    if (name == "flip-k") return gen::Dynamics::FlipKPerStep;
    throw CommandError{kExitUsage, "unknown dynamics: " + name};
}

struct RunOptions {
    std::string instance_path;
    std::string engine = "sym-bin";
    int steps = 10;
    std::string a;
    std::string policy = "lex";
    std::string out_path;
};

int cmd_run(const RunOptions& opt, std::ostream& out) {
    Instance instance = Instance::load(opt.instance_path);

    engines::EngineConfig config;
    config.scan = opt.policy == "dfs" ? engines::ScanPolicy::FirstFoundDfs
                                      : engines::ScanPolicy::Lexicographic;
    if (!opt.a.empty()) config.a = Rat::parse(opt.a);

    auto engine = engines::make_engine(opt.engine, instance, config);

    Trace trace;
    trace.engine = std::string(engine->name());
    trace.mode = trace_mode_of(engine->mode());
    trace.a = config.a ? config.a : instance.a;

    bool all_verdicts = true;
    for (int step = 0; step < opt.steps; ++step) {
        const engines::StepReport report = engine->step();
        trace.records.push_back(Trace::record_from(report));
        if (!report.ef1 || (report.envy_cycle_free && !*report.envy_cycle_free) ||
            (report.envy_bounded && !*report.envy_bounded))
            all_verdicts = false;
    }

    if (!opt.out_path.empty()) trace.save(opt.out_path);

    int total_iterations = 0;
    for (const TraceRecord& rec : trace.records) total_iterations += rec.iterations;
    out << "engine " << trace.engine << ", " << opt.steps << " steps, " << total_iterations
        << " swap/steal iterations, verdicts " << (all_verdicts ? "all true" : "VIOLATED")
        << "\n";
    return all_verdicts ? kExitPass : kExitPropertyFail;
}

int cmd_verify(const std::string& instance_path, const std::string& trace_path,
               const std::string& mode, std::ostream& out) {
    const Instance instance = Instance::load(instance_path);
    const Trace trace = Trace::load(trace_path);
    const oracle::VerifyReport report = oracle::verify_trace(instance, trace, mode);
    if (report.ok) {
        out << "trace verified: " << trace.records.size() << " steps, every property holds\n";
        return kExitPass;
    }
    out << "trace FAILED at t=" << report.failed_t << ": " << report.what << "\n"
        << report.state_dump;
    return kExitPropertyFail;
}

int cmd_counterexample(const std::string& which, bool no_maxweight, std::ostream& out) {
    if (which == "thm4") {
        const auto report = oracle::reproduce_ef1_over_rounds_counterexample();
        out << "dynamic binary, horizon 2, a=0/1: EF1-over-rounds sequence "
            << (report.search.exists ? "EXISTS (unexpected)" : "does not exist") << ", "
            << report.search.closed_branches << " sequences explored\n";
        for (const auto& entry : report.sweep)
            out << "  sweep a=" << entry.a.str() << ": sequence "
                << (entry.exists ? "exists" : "does not exist") << " ("
                << entry.closed_branches << " branches)\n";
        return report.search.exists ? kExitPropertyFail : kExitPass;
    }
    if (which == "thm5") {
        const auto report = oracle::reproduce_max_weight_counterexample(!no_maxweight);
        if (no_maxweight) {
            out << "static binary, horizon 6, any perfect matching: EF1 sequence "
                << (report.search.exists ? "exists" : "does not exist (unexpected)") << "\n";
            if (report.search.exists) {
                out << "witness rounds:\n";
                for (const RoundMatching& x : report.search.witness) {
                    out << "  t=" << x.t << ":";
                    for (int i = 0; i < x.size(); ++i)
                        out << " {N" << i << ",M" << x.partner[i] << "}";
                    out << "\n";
                }
            }
            return report.search.exists ? kExitPass : kExitPropertyFail;
        }
        out << "static binary, horizon 6, max-weight rounds only: EF1 sequence "
            << (report.search.exists ? "EXISTS (unexpected)" : "does not exist") << ", "
            << report.search.closed_branches << " branches closed\n"
            << "  even-step invariants " << (report.claims_hold ? "hold" : "VIOLATED") << " on "
            << report.claims_checked << " surviving prefixes\n";
        return (!report.search.exists && report.claims_hold) ? kExitPass : kExitPropertyFail;
    }
    throw CommandError{kExitUsage, "counterexample takes thm4 or thm5"};
}

int cmd_bench(const std::vector<int>& sizes, int steps, int seeds, std::ostream& out) {
    out << std::setw(6) << "n" << std::setw(8) << "steps" << std::setw(14) << "us/step"
        << std::setw(12) << "max swaps" << std::setw(10) << "bound"
        << "\n";
    bool bound_ok = true;
    for (int n : sizes) {
        long long total_us = 0;
        long total_steps = 0;
        int max_swaps = 0;
        for (int seed = 0; seed < seeds; ++seed) {
            gen::GeneratorSpec spec;
            spec.kind = gen::InstanceKind::SymmetricBinary;
            spec.n = spec.m = n;
            spec.like_density = 0.5;
            spec.seed = static_cast<std::uint64_t>(seed) * 1000003ULL + n;
            spec.dynamics = gen::Dynamics::RedrawEachStep;
            Instance instance = gen::generate(spec);

            engines::EngineConfig config;
            config.compute_verdicts = false;
            engines::SymBinRoundEngine engine(std::move(instance), config);

            const auto start = std::chrono::steady_clock::now();
            for (int step = 0; step < steps; ++step) {
                const auto report = engine.step();
                max_swaps = std::max(max_swaps, report.iterations);
            }
            const auto stop = std::chrono::steady_clock::now();
            total_us +=
                std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count();
            total_steps += steps;
        }
        const int bound = 2 * n * n;
        if (max_swaps > bound) bound_ok = false;
        out << std::setw(6) << n << std::setw(8) << steps << std::setw(14) << std::fixed
            << std::setprecision(2) << (static_cast<double>(total_us) / total_steps)
            << std::setw(12) << max_swaps << std::setw(10) << bound << "\n";
    }
    out << (bound_ok ? "swap bound respected across the sweep\n"
                     : "swap bound VIOLATED somewhere in the sweep\n");
    return bound_ok ? kExitPass : kExitPropertyFail;
}

struct GenOptions {
    std::string kind = "symmetric-binary";
    int n = 4, m = 4;
    double density = 0.5;
    std::uint64_t seed = 0;
    std::string dynamics = "static";
    int flip_k = 1;
    std::string a = "0/1";
    int steps = 1;
    bool pad = false;
    std::string out_path;
};

int cmd_gen(const GenOptions& opt, std::ostream& out) {
    gen::GeneratorSpec spec;
    spec.kind = parse_kind(opt.kind);
    spec.n = opt.n;
    spec.m = opt.m;
    spec.like_density = opt.density;
    spec.seed = opt.seed;
    spec.dynamics = parse_dynamics(opt.dynamics);
    spec.flip_k = opt.flip_k;
    spec.a = Rat::parse(opt.a);

    Instance instance = gen::generate(spec);
    instance = gen::materialize(instance, std::max(1, opt.steps));
    if (opt.pad) instance = gen::pad_to_square(instance);
    if (opt.out_path.empty()) throw CommandError{kExitUsage, "gen requires --out PATH"};
    instance.save(opt.out_path);
    out << "wrote " << opt.out_path << " (" << instance.shape.n << "x" << instance.shape.m
        << ")\n";
    return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"repeated two-sided matching simulator"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "run an engine over an instance, writing a trace");
    run->add_option("instance", run_opt.instance_path, "instance JSON path")->required();
    run->add_option("--engine", run_opt.engine, "sym-bin | asym-cycles | round-robin");
    run->add_option("--steps", run_opt.steps, "timesteps to run")->check(CLI::PositiveNumber);
    run->add_option("--a", run_opt.a, "low value override, p/q");
    run->add_option("--policy", run_opt.policy, "while-loop scan policy: lex | dfs")
        ->check(CLI::IsMember({"lex", "dfs"}));
    run->add_option("--out", run_opt.out_path, "trace output path");

    std::string verify_instance, verify_trace_path, verify_mode = "rounds";
    auto* verify = app.add_subcommand("verify", "re-derive every property of a trace");
    verify->add_option("instance", verify_instance, "instance JSON path")->required();
    verify->add_option("trace", verify_trace_path, "trace path")->required();
    verify->add_option("--mode", verify_mode, "rounds | time")
        ->check(CLI::IsMember({"rounds", "time"}));

    std::string which;
    bool no_maxweight = false;
    auto* counter = app.add_subcommand("counterexample", "reproduce an impossibility search");
    counter->add_option("which", which, "thm4 | thm5")->required();
    counter->add_flag("--no-maxweight", no_maxweight,
                      "drop the max-weight restriction (thm5 only)");

    std::vector<int> bench_sizes{8};
    int bench_steps = 100, bench_seeds = 10;
    auto* bench = app.add_subcommand("bench", "time the rounds engine across market sizes");
    bench->add_option("--n", bench_sizes, "market sizes to sweep");
    bench->add_option("--steps", bench_steps, "timesteps per instance");
    bench->add_option("--seeds", bench_seeds, "instances per size");

    GenOptions gen_opt;
    auto* genc = app.add_subcommand("gen", "generate a seeded instance file");
    genc->add_option("--kind", gen_opt.kind,
                     "symmetric-binary | only-symmetric-cycles | two-agent-additive | "
                     "general-binary");
    genc->add_option("--n", gen_opt.n, "side N size");
    genc->add_option("--m", gen_opt.m, "side M size");
    genc->add_option("--p", gen_opt.density, "like density in [0,1]");
    genc->add_option("--seed", gen_opt.seed, "generator seed");
    genc->add_option("--dynamics", gen_opt.dynamics, "static | redraw | flip-k");
    genc->add_option("--flip-k", gen_opt.flip_k, "pairs flipped per step");
    genc->add_option("--a", gen_opt.a, "low value, p/q");
    genc->add_option("--steps", gen_opt.steps, "horizon to materialize for dynamic kinds");
    genc->add_flag("--pad", gen_opt.pad, "pad the smaller side with dummy agents");
    genc->add_option("--out", gen_opt.out_path, "instance output path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt, out);
        if (verify->parsed())
            return cmd_verify(verify_instance, verify_trace_path, verify_mode, out);
        if (counter->parsed()) return cmd_counterexample(which, no_maxweight, out);
        if (bench->parsed()) return cmd_bench(bench_sizes, bench_steps, bench_seeds, out);
        if (genc->parsed()) return cmd_gen(gen_opt, out);
    } catch (const CommandError& e) {
        err << e.message << "\n";
        return e.code;
    } catch (const IoError& e) {
        err << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return kExitIo;
    } catch (const CapabilityError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const GuardError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    err << "no command given\n";
    return kExitUsage;
}

}  // namespace fairmatch::cli
