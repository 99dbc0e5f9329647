#pragma once

#include <vector>

namespace jamnet {

struct Edge {
    int to = 0;
    double cost = 0.0; // must be > 0
};

// Single-source shortest paths over an adjacency list. Ties are broken
// deterministically: paths compare by (cost, hop count, lexicographic node
// sequence), so identical inputs give identical trees on every platform.
struct ShortestPaths {
    int source = 0;
    std::vector<double> dist;  // +inf when unreachable
    std::vector<int> parent;   // -1 at source / unreachable
    std::vector<int> hops;
};

ShortestPaths dijkstra(const std::vector<std::vector<Edge>>& adj, int source);

// node sequence source..target; empty when target is unreachable
std::vector<int> extract_path(const ShortestPaths& sp, int target);

} // namespace jamnet
