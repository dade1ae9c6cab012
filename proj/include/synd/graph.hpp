#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace synd {

/// Directed multigraph on vertices 0..n-1; `edges[u]` lists targets with repetition.
using Digraph = std::vector<std::vector<std::uint32_t>>;

/// Strongly connected components. Components are numbered in reverse topological order:
/// every edge u -> v between distinct components satisfies comp[u] > comp[v].
struct Sccs {
    std::vector<std::uint32_t> component;         // vertex -> component id
    std::vector<std::vector<std::uint32_t>> members;

    std::size_t count() const noexcept { return members.size(); }
};

/// Iterative Tarjan.
inline Sccs strongly_connected_components(const Digraph& g) {
    const std::size_t n = g.size();
    constexpr std::uint32_t unvisited = ~0u;
    std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    Sccs out;
    out.component.assign(n, 0);
    std::uint32_t counter = 0;

    struct Frame {
        std::uint32_t v;
        std::size_t edge;
    };
    std::vector<Frame> call;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != unvisited)
            continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < g[f.v].size()) {
                std::uint32_t w = g[f.v][f.edge++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::uint32_t v = f.v;
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<std::uint32_t> comp;
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.component[w] = static_cast<std::uint32_t>(out.members.size());
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                out.members.push_back(std::move(comp));
            }
        }
    }
    return out;
}

/// Edges inside component c (counted with multiplicity).
inline std::size_t internal_edges(const Digraph& g, const Sccs& s, std::uint32_t c) {
    std::size_t e = 0;
    for (std::uint32_t u : s.members[c])
        for (std::uint32_t v : g[u])
            if (s.component[v] == c)
                ++e;
    return e;
}

/// Period of a strongly connected component with at least one internal edge: gcd of the
/// lengths of its cycles, via BFS levels from one member. Returns 0 for acyclic components.
inline std::uint64_t component_period(const Digraph& g, const Sccs& s, std::uint32_t c) {
    const auto& mem = s.members[c];
    std::vector<std::int64_t> level(g.size(), -1);
    std::vector<std::uint32_t> queue{mem.front()};
    level[mem.front()] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        std::uint32_t u = queue[h];
        for (std::uint32_t v : g[u])
            if (s.component[v] == c && level[v] < 0) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
    }
    std::uint64_t period = 0;
    for (std::uint32_t u : mem)
        for (std::uint32_t v : g[u])
            if (s.component[v] == c) {
                std::int64_t diff = level[u] + 1 - level[v];
                period = std::gcd(period, static_cast<std::uint64_t>(diff < 0 ? -diff : diff));
            }
    return period;
}

/// Condensation DAG: component -> distinct successor components.
inline std::vector<std::vector<std::uint32_t>> condensation(const Digraph& g, const Sccs& s) {
    std::vector<std::vector<std::uint32_t>> dag(s.count());
    for (std::uint32_t u = 0; u < g.size(); ++u)
        for (std::uint32_t v : g[u])
            if (s.component[u] != s.component[v])
                dag[s.component[u]].push_back(s.component[v]);
    for (auto& succ : dag) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    return dag;
}

}  // namespace synd
