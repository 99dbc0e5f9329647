#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "jamnet/channel.hpp"
#include "jamnet/graph.hpp"

namespace jamnet {

enum class Algorithm { MER, MER_EQ, MER_AP, OPTIMAL };

std::string_view algorithm_name(Algorithm a);           // "MER", "MER-EQ", ...
Algorithm algorithm_from_name(std::string_view name);   // accepts "mer", "MER-EQ", ...

// A routed source-destination plan: node sequence, per-link transmit powers,
// per-link exact outage probabilities, and the induced end-to-end outage.
struct RoutePlan {
    Algorithm algorithm = Algorithm::MER;
    std::vector<int> nodes;         // simple path source..dest
    std::vector<double> powers;     // size nodes.size()-1, all > 0
    std::vector<double> link_outages;
    double e2e_outage = 0.0;        // 1 - prod(1 - link_outages)
    double total_power = 0.0;       // sum of powers

    int hops() const { return static_cast<int>(powers.size()); }
    void validate() const;
};

void to_json(nlohmann::json& j, const RoutePlan& plan);
std::string plan_to_string(const RoutePlan& plan); // pretty JSON + '\n'

// The outage budget in the power-allocation variable:
// eps = -ln(1-pi) / gamma, so that sum_k d^a (N0+J)/P_k <= eps is
// equivalent to the end-to-end bound staying below pi.
struct EpsilonBudget {
    double eps = 0.0;
    double pi = 0.0;
};

EpsilonBudget epsilon_budget(double pi, double gamma);

// sqrt(d^a (N0 + J)): the additive link weight whose squared path sum is the
// minimum total power (times 1/eps) under the exponential outage bound.
double merap_link_weight(const LinkGeometry& geom, const ChannelParams& params);

// Lagrange allocation for a path with weights w: P_i = w_i * (sum w) / eps.
// Satisfies sum w_i^2 / P_i = eps and sum P_i = (sum w)^2 / eps exactly.
std::vector<double> allocate_powers_approx(std::span<const double> weights,
                                           const EpsilonBudget& budget);

// 1 - (1-pi)^(1/h): equal per-link outage meeting pi end to end over h hops
double per_hop_outage_equal(double pi, int h);

// 1 - prod(1 - p_k)
double end_to_end_outage(std::span<const double> link_outages);

// End-to-end retransmission cost: total / (1 - pi). Scaling by a constant
// per fixed pi, it never changes which path is cheapest.
double eer_total_power(double total, double pi);

// Layered replication of the instance graph: source plus N-1 replicas of
// every other node, wired so that every path from the source to replica
// u(h) has exactly h edges. Node count is 1 + (N-1)^2.
struct ExpandedGraph {
    int n_physical = 0;
    int source = 0;                    // physical source id
    std::vector<int> phys;             // expanded index -> physical id
    std::vector<int> layer;            // expanded index -> hop layer (0 = source)
    std::vector<std::vector<int>> adj; // edge targets (costs assigned per use)

    int source_index() const { return 0; }
    int replica_index(int u, int h) const; // u != source, 1 <= h <= N-1
    int node_count() const { return static_cast<int>(phys.size()); }
};

ExpandedGraph expand_network(const NetworkInstance& inst);

// MER-AP: one shortest-path run under merap_link_weight, closed-form power
// allocation, exact outage evaluation. End-to-end outage <= pi always.
RoutePlan merap_route(const NetworkInstance& inst, double pi);
RoutePlan merap_route(const NetworkInstance& inst, double pi, int src, int dst);

// Redistribute the slack of a plan with e2e outage below pi: scale every
// link's success probability by delta^(1/H), delta = (1-pi)/(1-p_e2e), and
// re-solve the powers. Lands on pi exactly and never costs more.
RoutePlan heuristic_tighten(const RoutePlan& plan, double pi, const NetworkInstance& inst);

// MER-EQ: equal outage 1-(1-pi)^(1/h) per link; for each hop count h the
// cheapest h-hop path is found on the expanded graph with link costs set to
// the exact required powers, and the best h wins.
RoutePlan mereq_route(const NetworkInstance& inst, double pi);
RoutePlan mereq_route(const NetworkInstance& inst, double pi, int src, int dst);

// MER: jamming-oblivious benchmark. Route and per-link outage split are
// fixed by the jammer-free problem (weights sqrt(d^a)); powers are then
// re-solved with the jammers present at those same outage targets.
RoutePlan mer_route(const NetworkInstance& inst, double pi);
RoutePlan mer_route(const NetworkInstance& inst, double pi, int src, int dst);

} // namespace jamnet
