#include "fairmatch/matching.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>

namespace fairmatch::matching {

RoundWeights RoundWeights::from_oracle(const Valuation& oracle, int t) {
    const MarketShape shape = oracle.shape();
    if (!shape.square()) throw UsageError("round weights require a square market");
    RoundWeights rw;
    rw.t = t;
    rw.n = shape.n;
    rw.w.assign(shape.n, std::vector<Rat>(shape.n));
    const Rat half(1, 2);
    for (int i = 0; i < shape.n; ++i)
        for (int j = 0; j < shape.n; ++j)
            rw.w[i][j] =
                (oracle.value(t, agent_n(i), agent_m(j)) + oracle.value(t, agent_m(j), agent_n(i))) *
                half;
    return rw;
}

namespace {

void check_perfect(int n, const RoundMatching& x) {
    if (x.size() != n) throw UsageError("matching size does not fit the market");
    std::vector<bool> used(n, false);
    for (int j : x.partner) {
        if (j < 0 || j >= n || used[j]) throw UsageError("not a perfect matching");
        used[j] = true;
    }
}

}  // namespace

Rat matching_weight(const RoundWeights& weights, const RoundMatching& x) {
    check_perfect(weights.n, x);
    Rat total(0);
    for (int i = 0; i < weights.n; ++i) total += weights.w[i][x.partner[i]];
    return total;
}

GoodEdgeSet good_edges(const Valuation& oracle, int t, const RoundMatching& x) {
    RequiredCapabilities req;
    req.binary = true;
    req.symmetric = true;
    if (auto check = validate_oracle(oracle, t, req); !check)
        throw CapabilityError("good edges need a binary symmetric profile: " + check.what);
    check_perfect(oracle.shape().n, x);
    GoodEdgeSet set;
    for (int i = 0; i < x.size(); ++i) {
        const int j = x.partner[i];
        if (oracle.value(t, agent_n(i), agent_m(j)).is_one())
            set.edges.emplace_back(i, j);
    }
    return set;
}

MatchingResult max_weight_matching_general(const RoundWeights& weights) {
    const int n = weights.n;
    if (n == 0) throw UsageError("empty weight matrix");

    // Shortest-augmenting-path assignment on cost = -w (so the minimum-cost
    // assignment is the maximum-weight matching). Rows and columns are
    // 1-based internally with column 0 as the staging slot.
    const std::optional<Rat> inf;  // nullopt plays +infinity
    std::vector<Rat> potential_row(n + 1), potential_col(n + 1);
    std::vector<int> matched_row(n + 1, 0);  // matched_row[col] = row occupying col
    std::vector<int> way(n + 1, 0);

    auto cost = [&](int row, int col) { return -weights.w[row - 1][col - 1]; };

    for (int row = 1; row <= n; ++row) {
        matched_row[0] = row;
        int j0 = 0;
        std::vector<std::optional<Rat>> min_to(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = matched_row[j0];
            std::optional<Rat> delta;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const Rat cur = cost(i0, j) - potential_row[i0] - potential_col[j];
                if (!min_to[j] || cur < *min_to[j]) {
                    min_to[j] = cur;
                    way[j] = j0;
                }
                if (!delta || *min_to[j] < *delta) {
                    delta = *min_to[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    potential_row[matched_row[j]] += *delta;
                    potential_col[j] -= *delta;
                } else if (min_to[j]) {
                    *min_to[j] -= *delta;
                }
            }
            j0 = j1;
        } while (matched_row[j0] != 0);
        do {
            const int j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    MatchingResult result;
    result.matching.partner.assign(n, -1);
    for (int col = 1; col <= n; ++col) result.matching.partner[matched_row[col] - 1] = col - 1;
    result.matching.t = weights.t;
    result.weight = matching_weight(weights, result.matching);
    return result;
}

std::vector<int> hopcroft_karp(int n, int m, const std::vector<std::vector<bool>>& edge) {
    constexpr int kNil = -1;
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (edge[i][j]) adj[i].push_back(j);

    std::vector<int> match_left(n, kNil), match_right(m, kNil), dist(n);

    auto bfs = [&]() {
        std::queue<int> queue;
        bool reachable_free = false;
        for (int i = 0; i < n; ++i) {
            if (match_left[i] == kNil) {
                dist[i] = 0;
                queue.push(i);
            } else {
                dist[i] = -1;
            }
        }
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop();
            for (int v : adj[u]) {
                const int w = match_right[v];
                if (w == kNil) {
                    reachable_free = true;
                } else if (dist[w] == -1) {
                    dist[w] = dist[u] + 1;
                    queue.push(w);
                }
            }
        }
        return reachable_free;
    };

    std::function<bool(int)> dfs = [&](int u) {
        for (int v : adj[u]) {
            const int w = match_right[v];
            if (w == kNil || (dist[w] == dist[u] + 1 && dfs(w))) {
                match_left[u] = v;
                match_right[v] = u;
                return true;
            }
        }
        dist[u] = -1;
        return false;
    };

    while (bfs())
        for (int i = 0; i < n; ++i)
            if (match_left[i] == kNil) dfs(i);
    return match_left;
}

RoundMatching max_weight_matching_on_likes(int t, const std::vector<std::vector<bool>>& liked) {
    const int n = static_cast<int>(liked.size());
    std::vector<int> partner = hopcroft_karp(n, n, liked);

    // Complete with leftover agents in ascending order; every leftover pair
    // contributes the same weight a, so the completion is weight-neutral.
    std::vector<bool> m_used(n, false);
    for (int j : partner)
        if (j >= 0) m_used[j] = true;
    int next_free = 0;
    for (int i = 0; i < n; ++i) {
        if (partner[i] >= 0) continue;
        while (m_used[next_free]) ++next_free;
        partner[i] = next_free;
        m_used[next_free] = true;
    }

    RoundMatching x;
    x.t = t;
    x.partner = std::move(partner);
    return x;
}

RoundMatching max_weight_matching_binary_symmetric(const Valuation& oracle, int t,
                                                   const MarketShape& shape) {
    if (!shape.square()) throw UsageError("round matching requires a square market");
    RequiredCapabilities req;
    req.binary = true;
    req.symmetric = true;
    if (auto check = validate_oracle(oracle, t, req); !check)
        throw CapabilityError("fast matcher needs a binary symmetric profile: " + check.what);

    const int n = shape.n;
    std::vector<std::vector<bool>> liked(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            liked[i][j] = oracle.value(t, agent_n(i), agent_m(j)).is_one();
    return max_weight_matching_on_likes(t, liked);
}

void enumerate_perfect_matchings(const MarketShape& shape,
                                 const std::function<void(const RoundMatching&)>& visit) {
    if (!shape.square()) throw UsageError("perfect matchings require a square market");
    if (shape.n > 8) throw GuardError("perfect-matching enumeration is guarded to n <= 8");
    RoundMatching x;
    x.t = 1;
    x.partner.resize(shape.n);
    std::iota(x.partner.begin(), x.partner.end(), 0);
    do {
        visit(x);
    } while (std::next_permutation(x.partner.begin(), x.partner.end()));
}

MatchingResult brute_force_max_weight(const RoundWeights& weights) {
    std::optional<MatchingResult> best;
    MarketShape shape{weights.n, weights.n};
    enumerate_perfect_matchings(shape, [&](const RoundMatching& x) {
        Rat w = matching_weight(weights, x);
        if (!best || w > best->weight) best = MatchingResult{x, w};
    });
    best->matching.t = weights.t;
    return *best;
}

}  // namespace fairmatch::matching
