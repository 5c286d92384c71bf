#pragma once

#include <cstdint>
#include <functional>
#include <map>

#include "fairmatch/instance.hpp"

namespace fairmatch::gen {

enum class InstanceKind {
    SymmetricBinary,      ///< mutual likes with density p; engine 1 class
    OnlySymmetricCycles,  ///< symmetric core plus asymmetric bridge edges
    TwoAgentAdditive,     ///< |N| = 2, bounded random rationals
    GeneralBinary,        ///< each direction drawn independently
};

enum class Dynamics {
    Static,
    RedrawEachStep,   ///< a fresh like matrix each timestep
    FlipKPerStep,     ///< k mutual like-pairs toggled per timestep
};

/// Seed-driven instance recipe. The seed fully determines the output;
/// identical specs produce bit-identical instances.
struct GeneratorSpec {
    InstanceKind kind = InstanceKind::SymmetricBinary;
    int n = 2;
    int m = 2;
    double like_density = 0.5;
    std::uint64_t seed = 0;
    Dynamics dynamics = Dynamics::Static;
    int flip_k = 1;
    Rat a = Rat(0);  ///< low value for binary kinds
};

/// Builds the instance described by the spec. Dynamics other than Static
/// yield a generator-backed dynamic valuation (materialize before
/// serializing). Throws UsageError on infeasible specs.
Instance generate(const GeneratorSpec& spec);

/// Extends the smaller side with all-zero-value dummy agents until the
/// market is square. Table- and script-backed instances only.
Instance pad_to_square(const Instance& instance);

/// Materializes any valuation into a script of `horizon` explicit
/// matrices (a single table when the profile is static), so it can be
/// written to an instance file.
Instance materialize(const Instance& instance, int horizon);

/// Dynamic valuation whose per-step matrices come from an outside
/// supplier, pulled lazily on the first query of each timestep and then
/// frozen. An adversary can thus react to everything confirmed before t
/// when choosing the values for t.
class AdaptiveValuation final : public Valuation {
public:
    using Supplier = std::function<ValueMatrix(int t)>;

    AdaptiveValuation(MarketShape shape, Capabilities caps, Supplier supplier);

    const Capabilities& capabilities() const override { return caps_; }
    MarketShape shape() const override { return shape_; }

protected:
    Rat cross_value(int t, int n_index, int m_index) const override;
    Rat cross_value_reverse(int t, int n_index, int m_index) const override;

private:
    const ValueMatrix& matrix_at(int t) const;

    MarketShape shape_;
    Capabilities caps_;
    Supplier supplier_;
    mutable std::map<int, ValueMatrix> cache_;
};

}  // namespace fairmatch::gen
