#pragma once

#include <functional>
#include <vector>

#include "fairmatch/history.hpp"
#include "fairmatch/rational.hpp"
#include "fairmatch/valuation.hpp"

namespace fairmatch::matching {

/// Cross-side edge weights for one timestep:
/// w(i, j) = (v_i^t(j) + v_j^t(i)) / 2, exact.
struct RoundWeights {
    int t = 1;
    int n = 0;
    std::vector<std::vector<Rat>> w;  ///< [n][n]

    static RoundWeights from_oracle(const Valuation& oracle, int t);
};

/// W^t(x) = sum of w over the matching's pairs. The matching must be a
/// perfect matching of the square market.
Rat matching_weight(const RoundWeights& weights, const RoundMatching& x);

/// The "good matches" of a round matching under a binary symmetric
/// profile: pairs valued 1 by both endpoints. Stored as the matched pairs
/// {i, partner[i]} whose edge is good.
struct GoodEdgeSet {
    std::vector<std::pair<int, int>> edges;  ///< (n_index, m_index)

    int size() const { return static_cast<int>(edges.size()); }
};

/// Throws CapabilityError unless the oracle is binary symmetric at t.
GoodEdgeSet good_edges(const Valuation& oracle, int t, const RoundMatching& x);

struct MatchingResult {
    RoundMatching matching;
    Rat weight;
};

/// Exact maximum-weight perfect matching via the primal-dual assignment
/// method (shortest augmenting paths with potentials), cubic time, all
/// arithmetic in exact rationals. Deterministic for a fixed input: rows
/// are processed in ascending order and strict comparisons break ties in
/// favor of the smallest column index.
MatchingResult max_weight_matching_general(const RoundWeights& weights);

/// Fast path for binary symmetric profiles: maximum-cardinality matching
/// on the good-edge graph by Hopcroft-Karp augmentation, completed to a
/// perfect matching by pairing leftover agents in ascending index order
/// (any completion has the same weight; the fixed order makes runs
/// reproducible). The result's weight equals the general solver's optimum.
RoundMatching max_weight_matching_binary_symmetric(const Valuation& oracle, int t,
                                                   const MarketShape& shape);

/// Maximum-cardinality bipartite matching on an explicit edge set;
/// left/right sizes n and m, adjacency given as edge[i][j]. Returns the
/// partner of each left vertex, -1 where unmatched. Exposed for the
/// desire-graph engine and tests.
std::vector<int> hopcroft_karp(int n, int m, const std::vector<std::vector<bool>>& edge);

/// Core of the fast path, for callers that already hold a validated
/// square like matrix: maximum-cardinality matching on the liked pairs,
/// completed to a perfect matching in ascending index order.
RoundMatching max_weight_matching_on_likes(int t, const std::vector<std::vector<bool>>& liked);

/// Yields every perfect matching of an n x n market exactly once, in
/// lexicographic partner order. Guarded to n <= 8 (8! = 40320).
void enumerate_perfect_matchings(const MarketShape& shape,
                                 const std::function<void(const RoundMatching&)>& visit);

/// Convenience: brute-force optimum over all perfect matchings.
MatchingResult brute_force_max_weight(const RoundWeights& weights);

}  // namespace fairmatch::matching
