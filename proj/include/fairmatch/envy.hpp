#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fairmatch/ledger.hpp"
#include "fairmatch/rational.hpp"
#include "fairmatch/valuation.hpp"

namespace fairmatch::envy {

/// Directed envy relation over one side of the market, derived from a
/// ledger snapshot: edge (i, j) iff i's value for j's bundle strictly
/// exceeds i's value for its own.
struct EnvyGraph {
    Side side = Side::N;
    int size = 0;
    std::vector<std::vector<bool>> adj;  ///< adj[i][j]: i envies j

    bool edge(int i, int j) const { return adj[i][j]; }
};

EnvyGraph build_envy_graph(const ValueLedger& ledger, Side side);

/// Returns some directed cycle (vertex sequence, length >= 2) if one
/// exists, searching depth-first in ascending vertex order.
std::optional<std::vector<int>> has_envy_cycle(const EnvyGraph& graph);

/// Verdict of a c-envy-boundedness scan, with the worst offending pair.
struct BoundReport {
    bool bounded = true;
    AgentId envier{Side::N, 0};
    AgentId envied{Side::N, 0};
    Rat worst_gap;  ///< max over ordered same-side pairs of v_i(X_j) - v_i(X_i)
};

/// True iff v_i(X_j) - v_i(X_i) <= c for every ordered same-side pair.
BoundReport is_c_envy_bounded(const ValueLedger& ledger, const Rat& c);

/// Verdict of an EF1/EFX scan with the first violating pair, if any.
struct FairnessReport {
    bool ok = true;
    AgentId envier{Side::N, 0};
    AgentId envied{Side::N, 0};
    Rat residual;  ///< envy gap left after the allowed removal
};

/// EF1: whenever i envies j there is a single occurrence in X_j whose
/// removal eliminates the envy. With dynamic valuations, removing an
/// occurrence removes its time-stamped contribution v_i^{t'}(partner);
/// the scan removes the best occurrence for the envier (ties broken by
/// the earliest timestep).
FairnessReport is_ef1(const MatchHistory& history, const ValueLedger& ledger,
                      const Valuation& oracle);

/// EFX for {0,1} valuations: removing *any* positively valued occurrence
/// must eliminate the envy. Requires a binary01 oracle (throws
/// CapabilityError otherwise); on that class the verdict coincides with
/// EF1, which the tests assert rather than assume.
FairnessReport is_efx_binary01(const MatchHistory& history, const ValueLedger& ledger,
                               const Valuation& oracle);

/// A closed walk: consecutive vertices (cyclically) are edges of some
/// underlying graph; vertices may repeat. Self-loop edges are excluded.
struct Circuit {
    std::vector<int> vertices;

    int length() const { return static_cast<int>(vertices.size()); }
};

/// Extracts from a circuit a simple cycle that contains the edge
/// (i, suc(i)), where suc(i) is the successor of i's first occurrence.
/// Works by repeatedly splicing out the span between two occurrences of
/// a repeated vertex; every removed span leaves a valid circuit, so the
/// result is a cycle of the same graph. The circuit must be valid in a
/// self-loop-free graph and contain i.
std::vector<int> find_cycle_in_circuit(const Circuit& circuit, int vertex);

/// Undirected bipartite desire relation for a static binary01 profile:
/// edge {i, k} across sides iff v_i(k) + v_k(i) >= 1; the edge is
/// symmetric when both directions are 1.
struct DesireGraph {
    MarketShape shape;
    std::vector<std::vector<bool>> edge;        ///< [n][m]
    std::vector<std::vector<bool>> symmetric;   ///< [n][m], meaningful where edge

    bool has_edge(int n_index, int m_index) const { return edge[n_index][m_index]; }
    bool edge_symmetric(int n_index, int m_index) const { return symmetric[n_index][m_index]; }
};

/// Throws CapabilityError unless the oracle is static binary01.
DesireGraph build_desire_graph(const Valuation& oracle);

struct SymmetricCyclesReport {
    bool ok = true;
    std::optional<std::pair<AgentId, AgentId>> witness;  ///< asymmetric non-bridge edge
};

/// True iff every cycle of the desire graph consists solely of symmetric
/// edges; equivalently, every asymmetric edge is a bridge. Implemented
/// with standard bridge finding.
SymmetricCyclesReport only_symmetric_cycles(const DesireGraph& graph);

}  // namespace fairmatch::envy
