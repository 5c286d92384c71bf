#include "fairmatch/valuation.hpp"

namespace fairmatch {

void validate_value_matrix(const MarketShape& shape, const ValueMatrix& table) {
    const std::size_t total = static_cast<std::size_t>(shape.n) + shape.m;
    if (table.size() != total)
        throw ParseError("value matrix must have n+m rows");
    for (std::size_t r = 0; r < total; ++r) {
        if (table[r].size() != total)
            throw ParseError("value matrix must be square (n+m columns)");
        for (std::size_t c = 0; c < total; ++c) {
            const bool r_in_n = r < static_cast<std::size_t>(shape.n);
            const bool c_in_n = c < static_cast<std::size_t>(shape.n);
            if (r_in_n == c_in_n && !table[r][c].is_zero())
                throw ParseError("same-side value entries must be 0/1 (zero)");
        }
    }
}

TableValuation::TableValuation(MarketShape shape, ValueMatrix table, Capabilities caps)
    : shape_(shape), table_(std::move(table)), caps_(std::move(caps)) {
    validate_value_matrix(shape_, table_);
    caps_.is_static = true;
}

Rat TableValuation::cross_value(int, int n_index, int m_index) const {
    return table_[n_index][shape_.n + m_index];
}

Rat TableValuation::cross_value_reverse(int, int n_index, int m_index) const {
    return table_[shape_.n + m_index][n_index];
}

ScriptedValuation::ScriptedValuation(MarketShape shape, std::vector<ValueMatrix> script,
                                     Capabilities caps)
    : shape_(shape), script_(std::move(script)), caps_(std::move(caps)) {
    if (script_.empty()) throw ParseError("scripted valuation needs at least one matrix");
    for (const auto& m : script_) validate_value_matrix(shape_, m);
}

const ValueMatrix& ScriptedValuation::matrix_at(int t) const {
    if (t < 1) throw UsageError("timesteps start at 1");
    return script_[static_cast<std::size_t>(t - 1) % script_.size()];
}

Rat ScriptedValuation::cross_value(int t, int n_index, int m_index) const {
    return matrix_at(t)[n_index][shape_.n + m_index];
}

Rat ScriptedValuation::cross_value_reverse(int t, int n_index, int m_index) const {
    return matrix_at(t)[shape_.n + m_index][n_index];
}

ValidationReport validate_oracle(const Valuation& oracle, int t,
                                 const RequiredCapabilities& required) {
    const MarketShape shape = oracle.shape();
    const Capabilities& caps = oracle.capabilities();

    auto violation = [](std::string what, AgentId i, AgentId j) {
        ValidationReport r;
        r.ok = false;
        r.what = std::move(what);
        r.where = std::make_pair(i, j);
        return r;
    };

    if (required.binary && !caps.a.has_value()) {
        ValidationReport r;
        r.ok = false;
        r.what = "binary capability requires a declared low value a";
        return r;
    }

    for (int i = 0; i < shape.n; ++i) {
        for (int j = 0; j < shape.m; ++j) {
            const AgentId ni = agent_n(i);
            const AgentId mj = agent_m(j);
            const Rat fwd = oracle.value(t, ni, mj);
            const Rat rev = oracle.value(t, mj, ni);
            if (required.symmetric && fwd != rev)
                return violation("asymmetric value v_i(j) != v_j(i)", ni, mj);
            if (required.binary) {
                const Rat& a = *caps.a;
                if (fwd != a && !fwd.is_one())
                    return violation("value outside {a, 1}", ni, mj);
                if (rev != a && !rev.is_one())
                    return violation("value outside {a, 1}", mj, ni);
            }
            if (required.binary01) {
                if (!fwd.is_zero() && !fwd.is_one())
                    return violation("value outside {0, 1}", ni, mj);
                if (!rev.is_zero() && !rev.is_one())
                    return violation("value outside {0, 1}", mj, ni);
            }
            if (required.is_static) {
                if (oracle.value(1, ni, mj) != fwd || oracle.value(1, mj, ni) != rev)
                    return violation("value changed between timesteps", ni, mj);
            }
        }
    }
    return {};
}

}  // namespace fairmatch
