#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fairmatch/rational.hpp"
#include "fairmatch/types.hpp"

namespace fairmatch {

/// Declared properties of a valuation profile. Engines require certain
/// capabilities and validate them against the actual values before use.
struct Capabilities {
    bool is_static = false;    ///< values independent of the timestep
    bool binary = false;       ///< every cross-side value is a or 1
    bool binary01 = false;     ///< every cross-side value is 0 or 1
    bool symmetric = false;    ///< v_i(j) == v_j(i) at every timestep
    std::optional<Rat> a;      ///< the low value when binary, in [0,1)
};

/// Source of per-timestep values v_i^t(j). Same-side values are always 0.
/// Implementations must be pure in (t, i, j): a timestep's values never
/// change once queried, even for dynamic profiles.
class Valuation {
public:
    virtual ~Valuation() = default;

    Rat value(int t, const AgentId& i, const AgentId& j) const {
        if (i.side == j.side) return Rat(0);
        if (i.side == Side::N) return cross_value(t, i.index, j.index);
        return cross_value_reverse(t, j.index, i.index);
    }

    virtual const Capabilities& capabilities() const = 0;
    virtual MarketShape shape() const = 0;

protected:
    /// v_i^t(j) for i in N, j in M.
    virtual Rat cross_value(int t, int n_index, int m_index) const = 0;
    /// v_j^t(i) for i in N, j in M.
    virtual Rat cross_value_reverse(int t, int n_index, int m_index) const = 0;
};

/// A full (n+m) x (n+m) value matrix; rows/columns 0..n-1 are side N,
/// n..n+m-1 are side M. Same-side entries must be zero.
using ValueMatrix = std::vector<std::vector<Rat>>;

/// Static valuation backed by a single matrix.
class TableValuation final : public Valuation {
public:
    TableValuation(MarketShape shape, ValueMatrix table, Capabilities caps);

    const Capabilities& capabilities() const override { return caps_; }
    MarketShape shape() const override { return shape_; }
    const ValueMatrix& table() const { return table_; }

protected:
    Rat cross_value(int t, int n_index, int m_index) const override;
    Rat cross_value_reverse(int t, int n_index, int m_index) const override;

private:
    MarketShape shape_;
    ValueMatrix table_;
    Capabilities caps_;
};

/// Scripted valuation: one matrix per timestep, reused cyclically past
/// the end of the script.
class ScriptedValuation final : public Valuation {
public:
    ScriptedValuation(MarketShape shape, std::vector<ValueMatrix> script, Capabilities caps);

    const Capabilities& capabilities() const override { return caps_; }
    MarketShape shape() const override { return shape_; }
    const ValueMatrix& matrix_at(int t) const;
    int script_length() const { return static_cast<int>(script_.size()); }

protected:
    Rat cross_value(int t, int n_index, int m_index) const override;
    Rat cross_value_reverse(int t, int n_index, int m_index) const override;

private:
    MarketShape shape_;
    std::vector<ValueMatrix> script_;
    Capabilities caps_;
};

/// Validates that a square matrix has zero same-side entries and the
/// right dimensions for the given shape. Throws ParseError otherwise.
void validate_value_matrix(const MarketShape& shape, const ValueMatrix& table);

/// Outcome of a capability check; a violation is a value, not a fault.
struct ValidationReport {
    bool ok = true;
    std::string what;                                ///< empty when ok
    std::optional<std::pair<AgentId, AgentId>> where;

    explicit operator bool() const { return ok; }
};

struct RequiredCapabilities {
    bool is_static = false;
    bool binary = false;
    bool binary01 = false;
    bool symmetric = false;
};

/// Checks that the declared capabilities actually hold at timestep t by
/// scanning all cross-side pairs; reports the first violating pair.
ValidationReport validate_oracle(const Valuation& oracle, int t,
                                 const RequiredCapabilities& required);

}  // namespace fairmatch
