#pragma once

#include <vector>

#include "jamnet/channel.hpp"
#include "jamnet/routing.hpp"

namespace jamnet {

// Exhaustive-search baseline: every simple source-destination path is
// enumerated and the exact outage-constrained minimum-power program is
// solved on each; the cheapest path wins. Exponential by nature, intended
// for small n.

struct PathEnumConfig {
    enum class Overflow { Error, Truncate };
    int max_hops = -1;          // -1: N-1 (all simple paths)
    long long max_paths = 1'000'000;
    Overflow on_overflow = Overflow::Error;
};

struct PathEnumeration {
    std::vector<std::vector<int>> paths; // lexicographic node-sequence order
    bool truncated = false;
};

PathEnumeration enumerate_paths(const NetworkInstance& inst, const PathEnumConfig& cfg);
PathEnumeration enumerate_paths(const NetworkInstance& inst, const PathEnumConfig& cfg,
                                int src, int dst);

// Minimum total power for one fixed path subject to the exact end-to-end
// outage constraint hitting pi. Solved by nested bisection: for a trial
// Lagrange multiplier lambda, each link power is the unique root of the
// stationarity condition 1 = lambda * (-dg/dP_k); the outer level bisects
// lambda until the constraint g(P) = -ln(1-pi) closes. g is convex and
// coordinatewise monotone, so both levels are globally convergent.
std::vector<double> optimal_power_for_path(const std::vector<int>& path,
                                           const NetworkInstance& inst, double pi);

RoutePlan brute_force_route(const NetworkInstance& inst, double pi,
                            const PathEnumConfig& cfg = {});
RoutePlan brute_force_route(const NetworkInstance& inst, double pi,
                            const PathEnumConfig& cfg, int src, int dst);

} // namespace jamnet
