#include "fairmatch/envy.hpp"

#include <algorithm>

namespace fairmatch::envy {

EnvyGraph build_envy_graph(const ValueLedger& ledger, Side side) {
    const int size = ledger.shape().side_size(side);
    EnvyGraph g;
    g.side = side;
    g.size = size;
    g.adj.assign(size, std::vector<bool>(size, false));
    for (int i = 0; i < size; ++i) {
        const AgentId ai{side, i};
        const Rat& own = ledger.value_of(ai, ai);
        for (int j = 0; j < size; ++j) {
            if (i == j) continue;
            if (ledger.value_of(ai, AgentId{side, j}) > own) g.adj[i][j] = true;
        }
    }
    return g;
}

std::optional<std::vector<int>> has_envy_cycle(const EnvyGraph& graph) {
    enum { White, Grey, Black };
    std::vector<int> color(graph.size, White);
    std::vector<int> stack;

    // Iterative DFS, ascending start vertex and ascending neighbors, so the
    // reported cycle is reproducible.
    std::vector<int> next(graph.size, 0);
    for (int start = 0; start < graph.size; ++start) {
        if (color[start] != White) continue;
        stack.push_back(start);
        color[start] = Grey;
        next[start] = 0;
        while (!stack.empty()) {
            const int u = stack.back();
            bool advanced = false;
            for (int& j = next[u]; j < graph.size; ++j) {
                if (!graph.adj[u][j]) continue;
                if (color[j] == Grey) {
                    // Back edge: the cycle is the stack from j onward.
                    auto it = std::find(stack.begin(), stack.end(), j);
                    return std::vector<int>(it, stack.end());
                }
                if (color[j] == White) {
                    color[j] = Grey;
                    next[j] = 0;
                    stack.push_back(j);
                    ++j;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) {
                color[u] = Black;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

BoundReport is_c_envy_bounded(const ValueLedger& ledger, const Rat& c) {
    BoundReport report;
    bool first = true;
    for (Side side : {Side::N, Side::M}) {
        const int size = ledger.shape().side_size(side);
        for (int i = 0; i < size; ++i) {
            for (int j = 0; j < size; ++j) {
                if (i == j) continue;
                const AgentId ai{side, i}, aj{side, j};
                const Rat gap = ledger.gap(ai, aj);
                if (first || gap > report.worst_gap) {
                    first = false;
                    report.worst_gap = gap;
                    report.envier = ai;
                    report.envied = aj;
                }
            }
        }
    }
    report.bounded = first || report.worst_gap <= c;
    return report;
}

namespace {

/// Largest removable contribution v_i^{t'}(partner) over occurrences in
/// j's bundle; earlier occurrences win ties.
Rat best_single_removal(const MatchHistory& history, const Valuation& oracle,
                        const AgentId& i, const AgentId& j) {
    Rat best(0);
    for (const BundleEntry& entry : history.bundle(j)) {
        const Rat v = oracle.value(entry.t, i, AgentId{other_side(j.side), entry.partner});
        if (v > best) best = v;
    }
    return best;
}

}  // namespace

FairnessReport is_ef1(const MatchHistory& history, const ValueLedger& ledger,
                      const Valuation& oracle) {
    for (Side side : {Side::N, Side::M}) {
        const int size = ledger.shape().side_size(side);
        for (int i = 0; i < size; ++i) {
            const AgentId ai{side, i};
            const Rat& own = ledger.value_of(ai, ai);
            for (int j = 0; j < size; ++j) {
                if (i == j) continue;
                const AgentId aj{side, j};
                const Rat& theirs = ledger.value_of(ai, aj);
                if (theirs <= own) continue;
                const Rat residual = theirs - best_single_removal(history, oracle, ai, aj) - own;
                if (residual.sign() > 0)
                    return {false, ai, aj, residual};
            }
        }
    }
    return {};
}

FairnessReport is_efx_binary01(const MatchHistory& history, const ValueLedger& ledger,
                               const Valuation& oracle) {
    if (!oracle.capabilities().binary01)
        throw CapabilityError("EFX check is defined here for binary01 oracles only");
    for (Side side : {Side::N, Side::M}) {
        const int size = ledger.shape().side_size(side);
        for (int i = 0; i < size; ++i) {
            const AgentId ai{side, i};
            const Rat& own = ledger.value_of(ai, ai);
            for (int j = 0; j < size; ++j) {
                if (i == j) continue;
                const AgentId aj{side, j};
                const Rat& theirs = ledger.value_of(ai, aj);
                if (theirs <= own) continue;
                // The envy gap must vanish after removing any positively
                // valued occurrence, i.e. after the *smallest* positive one.
                std::optional<Rat> smallest;
                for (const BundleEntry& entry : history.bundle(aj)) {
                    const Rat v =
                        oracle.value(entry.t, ai, AgentId{other_side(side), entry.partner});
                    if (v.sign() > 0 && (!smallest || v < *smallest)) smallest = v;
                }
                const Rat residual = theirs - (smallest ? *smallest : Rat(0)) - own;
                if (residual.sign() > 0)
                    return {false, ai, aj, residual};
            }
        }
    }
    return {};
}

std::vector<int> find_cycle_in_circuit(const Circuit& circuit, int vertex) {
    const int len = circuit.length();
    if (len < 2) throw UsageError("a circuit has at least two vertices");
    const auto begin = circuit.vertices.begin();
    const auto occurrence = std::find(begin, circuit.vertices.end(), vertex);
    if (occurrence == circuit.vertices.end())
        throw UsageError("vertex does not occur in the circuit");

    // Rotate so the chosen occurrence of the vertex is last; its successor
    // becomes the front, so the edge (vertex, suc) is the wrap-around edge.
    std::vector<int> walk;
    walk.reserve(len);
    const int pos = static_cast<int>(occurrence - begin);
    for (int q = 1; q <= len; ++q) walk.push_back(circuit.vertices[(pos + q) % len]);

    // Splice out the span between two occurrences of a repeated vertex.
    // The last element is preserved: if the later occurrence is the last
    // element, the earlier one (the same vertex) becomes the new last.
    for (;;) {
        int dup_first = -1, dup_second = -1;
        const int size = static_cast<int>(walk.size());
        for (int j = 0; j < size && dup_first < 0; ++j) {
            for (int k = j + 1; k < size; ++k) {
                if (walk[j] == walk[k]) {
                    dup_first = j;
                    dup_second = k;
                    break;
                }
            }
        }
        if (dup_first < 0) break;
        walk.erase(walk.begin() + dup_first + 1, walk.begin() + dup_second + 1);
    }
    return walk;
}

DesireGraph build_desire_graph(const Valuation& oracle) {
    const Capabilities& caps = oracle.capabilities();
    if (!caps.is_static || !caps.binary01)
        throw CapabilityError("desire graph requires a static binary01 oracle");
    const MarketShape shape = oracle.shape();
    DesireGraph g;
    g.shape = shape;
    g.edge.assign(shape.n, std::vector<bool>(shape.m, false));
    g.symmetric.assign(shape.n, std::vector<bool>(shape.m, false));
    for (int i = 0; i < shape.n; ++i) {
        for (int k = 0; k < shape.m; ++k) {
            const Rat fwd = oracle.value(1, agent_n(i), agent_m(k));
            const Rat rev = oracle.value(1, agent_m(k), agent_n(i));
            g.edge[i][k] = fwd.is_one() || rev.is_one();
            g.symmetric[i][k] = fwd.is_one() && rev.is_one();
        }
    }
    return g;
}

namespace {

/// Bridge finding on the bipartite desire graph; vertices 0..n-1 are side
/// N, n..n+m-1 side M. Standard DFS lowlink, iterative.
std::vector<std::pair<int, int>> find_bridges(const DesireGraph& g) {
    const int n = g.shape.n, m = g.shape.m, total = n + m;
    std::vector<std::vector<int>> adj(total);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k)
            if (g.edge[i][k]) {
                adj[i].push_back(n + k);
                adj[n + k].push_back(i);
            }

    std::vector<int> tin(total, -1), low(total, -1), parent(total, -1), next(total, 0);
    std::vector<std::pair<int, int>> bridges;
    int timer = 0;
    for (int start = 0; start < total; ++start) {
        if (tin[start] != -1) continue;
        std::vector<int> stack{start};
        tin[start] = low[start] = timer++;
        while (!stack.empty()) {
            const int u = stack.back();
            if (next[u] < static_cast<int>(adj[u].size())) {
                const int v = adj[u][next[u]++];
                if (v == parent[u]) continue;
                if (tin[v] != -1) {
                    low[u] = std::min(low[u], tin[v]);
                } else {
                    parent[v] = u;
                    tin[v] = low[v] = timer++;
                    stack.push_back(v);
                }
            } else {
                stack.pop_back();
                if (!stack.empty()) {
                    const int p = stack.back();
                    low[p] = std::min(low[p], low[u]);
                    if (low[u] > tin[p]) bridges.emplace_back(p, u);
                }
            }
        }
    }
    return bridges;
}

}  // namespace

SymmetricCyclesReport only_symmetric_cycles(const DesireGraph& graph) {
    const int n = graph.shape.n;
    std::vector<std::vector<bool>> is_bridge(n, std::vector<bool>(graph.shape.m, false));
    for (const auto& [u, v] : find_bridges(graph)) {
        const int ni = std::min(u, v);
        const int mi = std::max(u, v) - n;
        is_bridge[ni][mi] = true;
    }
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < graph.shape.m; ++k) {
            if (graph.edge[i][k] && !graph.symmetric[i][k] && !is_bridge[i][k]) {
                SymmetricCyclesReport report;
                report.ok = false;
                report.witness = std::make_pair(agent_n(i), agent_m(k));
                return report;
            }
        }
    }
    return {};
}

}  // namespace fairmatch::envy
