#include "fairmatch/gen.hpp"

#include <random>

namespace fairmatch::gen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// mt19937_64 with hand-rolled bounded sampling; the standard
/// distributions are implementation-defined, this keeps instances
/// bit-identical everywhere.
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v;
        do {
            v = engine();
        } while (v >= limit);
        return v % bound;
    }

    bool chance(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return (engine() >> 11) < static_cast<std::uint64_t>(p * 9007199254740992.0);  // 2^53
    }
};

using LikeMatrix = std::vector<std::vector<bool>>;  ///< [n][m]

LikeMatrix draw_mutual_likes(int n, int m, double p, Rng& rng) {
    LikeMatrix likes(n, std::vector<bool>(m, false));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k) likes[i][k] = rng.chance(p);
    return likes;
}

void flip_pairs(LikeMatrix& likes, int k, Rng& rng) {
    const int n = static_cast<int>(likes.size());
    const int m = static_cast<int>(likes[0].size());
    for (int q = 0; q < k; ++q) {
        const auto flat = rng.below(static_cast<std::uint64_t>(n) * m);
        const int i = static_cast<int>(flat) / m;
        const int j = static_cast<int>(flat) % m;
        likes[i][j] = !likes[i][j];
    }
}

/// Symmetric binary profile whose like matrix may change by step. The
/// per-step matrices are derived purely from (seed, t) and cached, so
/// queries at any past timestep stay stable.
class SymmetricBinaryValuation final : public Valuation {
public:
    SymmetricBinaryValuation(MarketShape shape, Rat a, GeneratorSpec spec, Capabilities caps)
        : shape_(shape), a_(std::move(a)), spec_(std::move(spec)), caps_(std::move(caps)) {}

    const Capabilities& capabilities() const override { return caps_; }
    MarketShape shape() const override { return shape_; }

    const LikeMatrix& likes_at(int t) const {
        if (t < 1) throw UsageError("timesteps start at 1");
        if (spec_.dynamics == Dynamics::Static) t = 1;
        if (auto it = cache_.find(t); it != cache_.end()) return it->second;
        if (spec_.dynamics == Dynamics::RedrawEachStep || t == 1) {
            Rng rng(splitmix64(spec_.seed) ^ static_cast<std::uint64_t>(t));
            return cache_.emplace(t, draw_mutual_likes(shape_.n, shape_.m, spec_.like_density, rng))
                .first->second;
        }
        // Flip dynamics evolve from the previous step's matrix.
        LikeMatrix likes = likes_at(t - 1);
        Rng rng(splitmix64(spec_.seed ^ static_cast<std::uint64_t>(t) * 0x51ed270b0f4343c5ULL));
        flip_pairs(likes, spec_.flip_k, rng);
        return cache_.emplace(t, std::move(likes)).first->second;
    }

protected:
    Rat cross_value(int t, int n_index, int m_index) const override {
        return likes_at(t)[n_index][m_index] ? Rat(1) : a_;
    }
    Rat cross_value_reverse(int t, int n_index, int m_index) const override {
        return cross_value(t, n_index, m_index);
    }

private:
    MarketShape shape_;
    Rat a_;
    GeneratorSpec spec_;
    Capabilities caps_;
    mutable std::map<int, LikeMatrix> cache_;
};

ValueMatrix cross_table(const MarketShape& shape, const std::function<Rat(int, int)>& fwd,
                        const std::function<Rat(int, int)>& rev) {
    const int total = shape.n + shape.m;
    ValueMatrix table(total, std::vector<Rat>(total, Rat(0)));
    for (int i = 0; i < shape.n; ++i)
        for (int k = 0; k < shape.m; ++k) {
            table[i][shape.n + k] = fwd(i, k);
            table[shape.n + k][i] = rev(i, k);
        }
    return table;
}

void check_spec(const GeneratorSpec& spec) {
    if (spec.n < 1 || spec.m < 1) throw UsageError("generator sides must be non-empty");
    if (spec.like_density < 0.0 || spec.like_density > 1.0)
        throw UsageError("like density must lie in [0, 1]");
    if (spec.flip_k < 0) throw UsageError("flip count must be non-negative");
    if (spec.a.sign() < 0 || spec.a >= Rat(1)) throw UsageError("a must lie in [0, 1)");
    if (spec.kind == InstanceKind::TwoAgentAdditive && spec.n != 2)
        throw UsageError("the two-agent kind requires n = 2");
    if (spec.kind != InstanceKind::SymmetricBinary && spec.dynamics != Dynamics::Static)
        throw UsageError("dynamics are supported for the symmetric-binary kind only");
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
    check_spec(spec);
    const MarketShape shape{spec.n, spec.m};
    Instance inst;
    inst.shape = shape;

    switch (spec.kind) {
        case InstanceKind::SymmetricBinary: {
            Capabilities caps;
            caps.symmetric = true;
            caps.binary = true;
            caps.binary01 = spec.a.is_zero();
            caps.a = spec.a;
            caps.is_static = spec.dynamics == Dynamics::Static;
            inst.a = spec.a;
            inst.valuation =
                std::make_shared<SymmetricBinaryValuation>(shape, spec.a, spec, std::move(caps));
            if (spec.dynamics == Dynamics::Static) return materialize(inst, 1);
            return inst;
        }

        case InstanceKind::GeneralBinary: {
            Rng rng(splitmix64(spec.seed ^ 0xabcdef12345ULL));
            LikeMatrix fwd = draw_mutual_likes(spec.n, spec.m, spec.like_density, rng);
            LikeMatrix rev = draw_mutual_likes(spec.m, spec.n, spec.like_density, rng);
            Capabilities caps;
            caps.binary = true;
            caps.binary01 = spec.a.is_zero();
            caps.a = spec.a;
            const Rat a = spec.a;
            inst.a = a;
            inst.valuation = std::make_shared<TableValuation>(
                shape,
                cross_table(
                    shape, [&](int i, int k) { return fwd[i][k] ? Rat(1) : a; },
                    [&](int i, int k) { return rev[k][i] ? Rat(1) : a; }),
                std::move(caps));
            return inst;
        }

        case InstanceKind::OnlySymmetricCycles: {
            // A symmetric core may contain cycles; asymmetric edges are
            // attached only to pendant agents, whose single incident edge
            // is necessarily a bridge.
            Rng rng(splitmix64(spec.seed ^ 0x5ca1ab1eULL));
            std::vector<bool> pendant_n(spec.n), pendant_m(spec.m);
            for (int i = 0; i < spec.n; ++i) pendant_n[i] = rng.chance(1.0 / 3.0);
            for (int k = 0; k < spec.m; ++k) pendant_m[k] = rng.chance(1.0 / 3.0);

            LikeMatrix fwd(spec.n, std::vector<bool>(spec.m, false));
            LikeMatrix rev(spec.n, std::vector<bool>(spec.m, false));
            for (int i = 0; i < spec.n; ++i)
                for (int k = 0; k < spec.m; ++k)
                    if (!pendant_n[i] && !pendant_m[k] && rng.chance(spec.like_density))
                        fwd[i][k] = rev[i][k] = true;

            // Pendants attach to core agents only; a pendant-to-pendant
            // chain could otherwise close an asymmetric cycle.
            std::vector<int> core_n, core_m;
            for (int i = 0; i < spec.n; ++i)
                if (!pendant_n[i]) core_n.push_back(i);
            for (int k = 0; k < spec.m; ++k)
                if (!pendant_m[k]) core_m.push_back(k);

            auto attach = [&](bool from_n, int index) {
                const auto& targets = from_n ? core_m : core_n;
                if (targets.empty()) return;  // nobody to attach to; stay isolated
                const int target = targets[rng.below(targets.size())];
                const bool outgoing = rng.chance(0.5);
                const int i = from_n ? index : target;
                const int k = from_n ? target : index;
                (outgoing == from_n ? fwd : rev)[i][k] = true;
            };
            for (int i = 0; i < spec.n; ++i)
                if (pendant_n[i]) attach(true, i);
            for (int k = 0; k < spec.m; ++k)
                if (pendant_m[k]) attach(false, k);

            Capabilities caps;
            caps.binary = caps.binary01 = true;
            caps.a = Rat(0);
            inst.a = Rat(0);
            inst.valuation = std::make_shared<TableValuation>(
                shape,
                cross_table(
                    shape, [&](int i, int k) { return fwd[i][k] ? Rat(1) : Rat(0); },
                    [&](int i, int k) { return rev[i][k] ? Rat(1) : Rat(0); }),
                std::move(caps));
            return inst;
        }

        case InstanceKind::TwoAgentAdditive: {
            Rng rng(splitmix64(spec.seed ^ 0x7ea9e47ULL));
            auto bounded_rational = [&rng] {
                const auto num = rng.below(13);
                const auto den = 1 + rng.below(4);
                return Rat(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
            };
            ValueMatrix fwd(spec.n, std::vector<Rat>(spec.m));
            ValueMatrix rev(spec.n, std::vector<Rat>(spec.m));
            for (int i = 0; i < spec.n; ++i)
                for (int k = 0; k < spec.m; ++k) {
                    fwd[i][k] = bounded_rational();
                    rev[i][k] = bounded_rational();
                }
            Capabilities caps;
            inst.valuation = std::make_shared<TableValuation>(
                shape,
                cross_table(
                    shape, [&](int i, int k) { return fwd[i][k]; },
                    [&](int i, int k) { return rev[i][k]; }),
                std::move(caps));
            return inst;
        }
    }
    throw UsageError("unknown generator kind");
}

Instance pad_to_square(const Instance& instance) {
    if (instance.shape.square()) return instance;
    const Capabilities& caps = instance.capabilities();
    if (caps.binary && caps.a && !caps.a->is_zero())
        throw CapabilityError("dummy agents have value 0; padding needs a = 0");

    const MarketShape old = instance.shape;
    const int side = std::max(old.n, old.m);
    const MarketShape padded{side, side};

    auto pad_matrix = [&](const ValueMatrix& table) {
        ValueMatrix out(2 * side, std::vector<Rat>(2 * side, Rat(0)));
        for (int i = 0; i < old.n; ++i)
            for (int k = 0; k < old.m; ++k) {
                out[i][side + k] = table[i][old.n + k];
                out[side + k][i] = table[old.n + k][i];
            }
        return out;
    };

    Instance out;
    out.shape = padded;
    out.a = instance.a;
    if (const auto* table = dynamic_cast<const TableValuation*>(instance.valuation.get())) {
        out.valuation =
            std::make_shared<TableValuation>(padded, pad_matrix(table->table()), caps);
    } else if (const auto* script =
                   dynamic_cast<const ScriptedValuation*>(instance.valuation.get())) {
        std::vector<ValueMatrix> matrices;
        for (int t = 1; t <= script->script_length(); ++t)
            matrices.push_back(pad_matrix(script->matrix_at(t)));
        out.valuation =
            std::make_shared<ScriptedValuation>(padded, std::move(matrices), caps);
    } else {
        throw UsageError("materialize dynamic instances before padding");
    }
    return out;
}

Instance materialize(const Instance& instance, int horizon) {
    if (horizon < 1) throw UsageError("materialization horizon must be positive");
    const MarketShape shape = instance.shape;
    const Valuation& oracle = *instance.valuation;

    auto matrix_of = [&](int t) {
        const int total = shape.n + shape.m;
        ValueMatrix table(total, std::vector<Rat>(total, Rat(0)));
        for (int i = 0; i < shape.n; ++i)
            for (int k = 0; k < shape.m; ++k) {
                table[i][shape.n + k] = oracle.value(t, agent_n(i), agent_m(k));
                table[shape.n + k][i] = oracle.value(t, agent_m(k), agent_n(i));
            }
        return table;
    };

    Instance out;
    out.shape = shape;
    out.a = instance.a;
    Capabilities caps = oracle.capabilities();
    if (caps.is_static) {
        out.valuation = std::make_shared<TableValuation>(shape, matrix_of(1), std::move(caps));
        return out;
    }
    std::vector<ValueMatrix> script;
    script.reserve(horizon);
    for (int t = 1; t <= horizon; ++t) script.push_back(matrix_of(t));
    out.valuation =
        std::make_shared<ScriptedValuation>(shape, std::move(script), std::move(caps));
    return out;
}

AdaptiveValuation::AdaptiveValuation(MarketShape shape, Capabilities caps, Supplier supplier)
    : shape_(shape), caps_(std::move(caps)), supplier_(std::move(supplier)) {}

const ValueMatrix& AdaptiveValuation::matrix_at(int t) const {
    if (t < 1) throw UsageError("timesteps start at 1");
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;
    ValueMatrix supplied = supplier_(t);
    validate_value_matrix(shape_, supplied);
    return cache_.emplace(t, std::move(supplied)).first->second;
}

Rat AdaptiveValuation::cross_value(int t, int n_index, int m_index) const {
    return matrix_at(t)[n_index][shape_.n + m_index];
}

Rat AdaptiveValuation::cross_value_reverse(int t, int n_index, int m_index) const {
    return matrix_at(t)[shape_.n + m_index][n_index];
}

}  // namespace fairmatch::gen
