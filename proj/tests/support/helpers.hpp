#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "fairmatch/instance.hpp"
#include "fairmatch/ledger.hpp"

namespace testsupport {

using namespace fairmatch;

/// Deterministic bounded sampling over mt19937_64 (tests never use the
/// implementation-defined standard distributions).
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
    bool chance_percent(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }
};

/// A blank (n+m)x(n+m) matrix.
inline ValueMatrix zeros(int n, int m) {
    return ValueMatrix(n + m, std::vector<Rat>(n + m, Rat(0)));
}

/// Cross-side entry setters using side-local indices.
inline void set_nm(ValueMatrix& t, int n, int i, int k, const Rat& v) { t[i][n + k] = v; }
inline void set_mn(ValueMatrix& t, int n, int i, int k, const Rat& v) { t[n + k][i] = v; }
inline void set_mutual(ValueMatrix& t, int n, int i, int k, const Rat& v) {
    set_nm(t, n, i, k, v);
    set_mn(t, n, i, k, v);
}

inline Instance table_instance(int n, int m, ValueMatrix table, Capabilities caps,
                               std::optional<Rat> a = std::nullopt) {
    Instance inst;
    inst.shape = {n, m};
    inst.a = std::move(a);
    inst.valuation =
        std::make_shared<TableValuation>(inst.shape, std::move(table), std::move(caps));
    return inst;
}

inline Instance scripted_instance(int n, int m, std::vector<ValueMatrix> script,
                                  Capabilities caps, std::optional<Rat> a = std::nullopt) {
    Instance inst;
    inst.shape = {n, m};
    inst.a = std::move(a);
    inst.valuation =
        std::make_shared<ScriptedValuation>(inst.shape, std::move(script), std::move(caps));
    return inst;
}

/// A uniformly random perfect matching of an n x n market.
inline std::vector<int> random_permutation(int n, Rng& rng) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[static_cast<int>(rng.below(i + 1))]);
    return p;
}

/// Applies T random rounds to a fresh state; per-round mode.
inline SimState random_round_history(const Instance& inst, int rounds, Rng& rng) {
    SimState state(inst.shape, HistoryMode::PerRound);
    for (int t = 1; t <= rounds; ++t) {
        RoundMatching x;
        x.t = t;
        x.partner = random_permutation(inst.shape.n, rng);
        state.apply(*inst.valuation, x.events());
    }
    return state;
}

/// All simple cycles (length >= 2) of a directed graph given by an
/// adjacency matrix, as vertex sequences; brute force over subsets and
/// rotations, for cross-checking cycle machinery on small graphs.
inline std::vector<std::vector<int>> all_simple_cycles(const std::vector<std::vector<bool>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::vector<int>> cycles;
    std::vector<int> path;
    std::vector<bool> in_path(n, false);

    // Enumerate from each start vertex; keep only cycles whose smallest
    // vertex is the start, so each cycle appears once (up to rotation).
    std::function<void(int, int)> extend = [&](int start, int u) {
        for (int v = 0; v < n; ++v) {
            if (!adj[u][v]) continue;
            if (v == start && path.size() >= 2) cycles.push_back(path);
            if (v > start && !in_path[v]) {
                path.push_back(v);
                in_path[v] = true;
                extend(start, v);
                in_path[v] = false;
                path.pop_back();
            }
        }
    };
    for (int start = 0; start < n; ++start) {
        path = {start};
        in_path.assign(n, false);
        in_path[start] = true;
        extend(start, start);
    }
    return cycles;
}

/// Does `cycle` (a rotation-insensitive vertex sequence) appear among the
/// simple cycles of adj, and does it contain the directed edge (a, b)?
inline bool is_simple_cycle_with_edge(const std::vector<std::vector<bool>>& adj,
                                      const std::vector<int>& cycle, int a, int b) {
    const int len = static_cast<int>(cycle.size());
    if (len < 2) return false;
    std::vector<int> seen(cycle);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
    bool has_edge = false;
    for (int q = 0; q < len; ++q) {
        const int u = cycle[q], v = cycle[(q + 1) % len];
        if (!adj[u][v]) return false;
        if (u == a && v == b) has_edge = true;
    }
    return has_edge;
}

}  // namespace testsupport
