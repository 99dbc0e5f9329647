#include "jamnet/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace jamnet {

namespace {

std::vector<int> chain_to(const std::vector<int>& parent, int v) {
    std::vector<int> path;
    for (int u = v; u != -1; u = parent[u]) path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
}

// is the source->a path lexicographically smaller than source->b?
bool lex_less(const std::vector<int>& parent, int a, int b) {
    return chain_to(parent, a) < chain_to(parent, b);
}

} // namespace

ShortestPaths dijkstra(const std::vector<std::vector<Edge>>& adj, int source) {
    const int n = static_cast<int>(adj.size());
    ShortestPaths sp;
    sp.source = source;
    sp.dist.assign(n, std::numeric_limits<double>::infinity());
    sp.parent.assign(n, -1);
    sp.hops.assign(n, 0);
    sp.dist[source] = 0.0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    queue.push({0.0, source});
    std::vector<char> settled(n, 0);

    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        for (const Edge& e : adj[u]) {
            if (!(e.cost > 0.0)) throw std::invalid_argument("dijkstra: edge costs must be > 0");
            if (settled[e.to]) continue;
            const double cand = d + e.cost;
            if (cand < sp.dist[e.to]) {
                sp.dist[e.to] = cand;
                sp.hops[e.to] = sp.hops[u] + 1;
                sp.parent[e.to] = u;
                queue.push({cand, e.to});
            } else if (cand == sp.dist[e.to]) {
                // positive costs mean every predecessor of e.to settles before
                // e.to pops, so tie updates here are always final in time
                const int h = sp.hops[u] + 1;
                if (h < sp.hops[e.to] ||
                    (h == sp.hops[e.to] && lex_less(sp.parent, u, sp.parent[e.to]))) {
                    sp.hops[e.to] = h;
                    sp.parent[e.to] = u;
                }
            }
        }
    }
    return sp;
}

std::vector<int> extract_path(const ShortestPaths& sp, int target) {
    if (target != sp.source && sp.parent[target] == -1) return {};
    return chain_to(sp.parent, target);
}

} // namespace jamnet
