#include "jamnet/routing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace jamnet {

namespace {

constexpr double kOutageFloor = 1e-12;
constexpr double kOutageCeil = 1.0 - 1e-12;

void check_pi(double pi) {
    if (!(pi >= kOutageFloor && pi <= kOutageCeil))
        throw std::domain_error("outage target pi must lie in [1e-12, 1-1e-12]");
}

// evaluates exact link outages along a node sequence and fills in the
// derived RoutePlan fields
RoutePlan finish_plan(Algorithm alg, const NetworkInstance& inst,
                      std::vector<int> nodes, std::vector<double> powers) {
    RoutePlan plan;
    plan.algorithm = alg;
    plan.nodes = std::move(nodes);
    plan.powers = std::move(powers);
    plan.link_outages.reserve(plan.powers.size());
    plan.total_power = 0.0;
    for (std::size_t k = 0; k + 1 < plan.nodes.size(); ++k) {
        const int tx = plan.nodes[k];
        const int rx = plan.nodes[k + 1];
        const double d = distance(inst.nodes[tx].pos, inst.nodes[rx].pos);
        const auto terms = jammer_terms_at(inst, rx);
        plan.link_outages.push_back(
            link_outage_exact(plan.powers[k], d, terms, inst.params));
        plan.total_power += plan.powers[k];
    }
    plan.e2e_outage = end_to_end_outage(plan.link_outages);
    plan.validate();
    return plan;
}

// sqrt(d^a) * sqrt(N0): MER's jamming-oblivious weight, kept in the same
// units as merap_link_weight so the jammer-free allocation carries over
double mer_link_weight(double d, const ChannelParams& params) {
    return std::sqrt(std::pow(d, params.alpha) * params.n0);
}

std::vector<std::vector<Edge>> complete_graph_adjacency(
    const NetworkInstance& inst, bool jamming_aware) {
    const int n = inst.size();
    std::vector<double> jam(n, 0.0);
    if (jamming_aware)
        for (int v = 0; v < n; ++v)
            jam[v] = aggregate_jamming(inst.nodes[v].pos, inst.jammers, inst.params);

    std::vector<std::vector<Edge>> adj(n);
    for (int u = 0; u < n; ++u) {
        adj[u].reserve(n - 1);
        for (int v = 0; v < n; ++v) {
            if (v == u) continue;
            const double d = distance(inst.nodes[u].pos, inst.nodes[v].pos);
            const double w = jamming_aware
                                 ? merap_link_weight({d, jam[v]}, inst.params)
                                 : mer_link_weight(d, inst.params);
            adj[u].push_back({v, w});
        }
    }
    return adj;
}

void check_endpoints(const NetworkInstance& inst, int src, int dst) {
    const int n = inst.size();
    if (src < 0 || src >= n || dst < 0 || dst >= n || src == dst)
        throw std::domain_error("invalid route endpoints");
}

} // namespace

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::MER: return "MER";
        case Algorithm::MER_EQ: return "MER-EQ";
        case Algorithm::MER_AP: return "MER-AP";
        case Algorithm::OPTIMAL: return "OPTIMAL";
    }
    throw std::logic_error("unknown algorithm tag");
}

Algorithm algorithm_from_name(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (s == "MER") return Algorithm::MER;
    if (s == "MER-EQ" || s == "MEREQ") return Algorithm::MER_EQ;
    if (s == "MER-AP" || s == "MERAP") return Algorithm::MER_AP;
    if (s == "OPTIMAL") return Algorithm::OPTIMAL;
    throw std::domain_error("unknown algorithm name: " + std::string(name));
}

void RoutePlan::validate() const {
    if (nodes.size() < 2) throw std::domain_error("RoutePlan: need at least 2 nodes");
    if (powers.size() != nodes.size() - 1 || link_outages.size() != powers.size())
        throw std::domain_error("RoutePlan: powers/link_outages length mismatch");
    std::set<int> seen(nodes.begin(), nodes.end());
    if (seen.size() != nodes.size())
        throw std::domain_error("RoutePlan: node sequence must be a simple path");
    for (double p : powers)
        if (!(p > 0.0)) throw std::domain_error("RoutePlan: powers must be > 0");
    const double e2e = end_to_end_outage(link_outages);
    if (std::abs(e2e - e2e_outage) > 1e-12)
        throw std::domain_error("RoutePlan: e2e_outage inconsistent with link outages");
}

void to_json(nlohmann::json& j, const RoutePlan& plan) {
    j = nlohmann::json{
        {"algorithm", std::string(algorithm_name(plan.algorithm))},
        {"nodes", plan.nodes},
        {"powers", plan.powers},
        {"link_outages", plan.link_outages},
        {"e2e_outage", plan.e2e_outage},
        {"total_power", plan.total_power},
    };
}

std::string plan_to_string(const RoutePlan& plan) {
    nlohmann::json j = plan;
    return j.dump(2) + "\n";
}

EpsilonBudget epsilon_budget(double pi, double gamma) {
    check_pi(pi);
    if (!(gamma > 0.0)) throw std::domain_error("gamma must be > 0");
    return {-std::log1p(-pi) / gamma, pi};
}

double merap_link_weight(const LinkGeometry& geom, const ChannelParams& params) {
    return std::sqrt(std::pow(geom.d, params.alpha) * (params.n0 + geom.jam));
}

std::vector<double> allocate_powers_approx(std::span<const double> weights,
                                           const EpsilonBudget& budget) {
    if (weights.empty()) throw std::domain_error("allocate_powers_approx: empty path");
    if (!(budget.eps > 0.0)) throw std::domain_error("allocate_powers_approx: eps must be > 0");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::domain_error("allocate_powers_approx: weights must be > 0");
        sum += w;
    }
    std::vector<double> powers;
    powers.reserve(weights.size());
    for (double w : weights) powers.push_back(w * sum / budget.eps);
    return powers;
}

double per_hop_outage_equal(double pi, int h) {
    check_pi(pi);
    if (h < 1) throw std::domain_error("hop count must be >= 1");
    // 1 - (1-pi)^(1/h), evaluated in log space
    return -std::expm1(std::log1p(-pi) / h);
}

double end_to_end_outage(std::span<const double> link_outages) {
    double log_success = 0.0;
    for (double p : link_outages) {
        if (!(p >= 0.0 && p < 1.0))
            throw std::domain_error("link outages must lie in [0,1)");
        log_success += std::log1p(-p);
    }
    return -std::expm1(log_success);
}

double eer_total_power(double total, double pi) {
    check_pi(pi);
    return total / (1.0 - pi);
}

int ExpandedGraph::replica_index(int u, int h) const {
    if (u == source || u < 0 || u >= n_physical)
        throw std::domain_error("replica_index: invalid physical node");
    if (h < 1 || h > n_physical - 1)
        throw std::domain_error("replica_index: layer out of range");
    const int rank = u < source ? u : u - 1;
    return 1 + (h - 1) * (n_physical - 1) + rank;
}

ExpandedGraph expand_network(const NetworkInstance& inst) {
    inst.validate();
    const int n = inst.size();
    ExpandedGraph g;
    g.n_physical = n;
    g.source = inst.source;

    g.phys.push_back(inst.source);
    g.layer.push_back(0);
    for (int h = 1; h <= n - 1; ++h)
        for (int u = 0; u < n; ++u)
            if (u != inst.source) {
                g.phys.push_back(u);
                g.layer.push_back(h);
            }

    g.adj.resize(g.phys.size());
    // source reaches every first-layer replica
    for (int u = 0; u < n; ++u)
        if (u != inst.source) g.adj[0].push_back(g.replica_index(u, 1));
    // u(h) -> v(h+1) for u not source/dest, v not source, v != u
    for (int h = 1; h <= n - 2; ++h)
        for (int u = 0; u < n; ++u) {
            if (u == inst.source || u == inst.dest) continue;
            for (int v = 0; v < n; ++v) {
                if (v == inst.source || v == u) continue;
                g.adj[g.replica_index(u, h)].push_back(g.replica_index(v, h + 1));
            }
        }
    return g;
}

RoutePlan merap_route(const NetworkInstance& inst, double pi) {
    return merap_route(inst, pi, inst.source, inst.dest);
}

RoutePlan merap_route(const NetworkInstance& inst, double pi, int src, int dst) {
    inst.validate();
    check_pi(pi);
    check_endpoints(inst, src, dst);

    const auto adj = complete_graph_adjacency(inst, /*jamming_aware=*/true);
    const auto sp = dijkstra(adj, src);
    const auto path = extract_path(sp, dst);

    std::vector<double> weights;
    weights.reserve(path.size() - 1);
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        weights.push_back(
            merap_link_weight(link_geometry(inst, path[k], path[k + 1]), inst.params));
    const auto powers =
        allocate_powers_approx(weights, epsilon_budget(pi, inst.params.gamma));
    return finish_plan(Algorithm::MER_AP, inst, path, powers);
}

RoutePlan heuristic_tighten(const RoutePlan& plan, double pi, const NetworkInstance& inst) {
    check_pi(pi);
    plan.validate();
    if (plan.e2e_outage > pi + 1e-12)
        throw std::domain_error("heuristic_tighten: plan already exceeds the outage target");

    const double delta = (1.0 - pi) / (1.0 - plan.e2e_outage);
    if (delta >= 1.0) return plan; // already on target

    const int h = plan.hops();
    const double log_scale = std::log(delta) / h;
    RoutePlan out = plan;
    for (int k = 0; k < h; ++k) {
        // new per-link success: delta^(1/H) * (1 - p_k)
        const double target =
            -std::expm1(log_scale + std::log1p(-plan.link_outages[k]));
        const int tx = plan.nodes[k];
        const int rx = plan.nodes[k + 1];
        const double d = distance(inst.nodes[tx].pos, inst.nodes[rx].pos);
        const auto terms = jammer_terms_at(inst, rx);
        const double p = required_power_exact(target, d, terms, inst.params);
        // the old power already meets the (laxer) new target, so never exceed it
        out.powers[k] = std::min(p, plan.powers[k]);
    }
    return finish_plan(plan.algorithm, inst, out.nodes, out.powers);
}

RoutePlan mereq_route(const NetworkInstance& inst, double pi) {
    return mereq_route(inst, pi, inst.source, inst.dest);
}

RoutePlan mereq_route(const NetworkInstance& inst, double pi, int src, int dst) {
    inst.validate();
    check_pi(pi);
    check_endpoints(inst, src, dst);

    NetworkInstance routed = inst;
    routed.source = src;
    routed.dest = dst;
    const ExpandedGraph g = expand_network(routed);
    const int n = inst.size();

    // physical directed-link power at the current per-hop target, memoized
    // per h iteration; the bisection dominates the runtime
    std::vector<double> link_power(static_cast<std::size_t>(n) * n);
    std::vector<char> link_done(static_cast<std::size_t>(n) * n);
    std::vector<std::vector<JammerTerm>> terms(n);
    for (int v = 0; v < n; ++v) terms[v] = jammer_terms_at(inst, v);

    double best_total = std::numeric_limits<double>::infinity();
    std::vector<int> best_path;
    std::vector<double> best_powers;

    std::vector<std::vector<Edge>> adj(g.node_count());
    for (int h = 1; h <= n - 1; ++h) {
        const double eps_h = per_hop_outage_equal(pi, h);
        std::fill(link_done.begin(), link_done.end(), 0);
        auto power_of = [&](int u, int v) {
            const std::size_t key = static_cast<std::size_t>(u) * n + v;
            if (!link_done[key]) {
                const double d = distance(inst.nodes[u].pos, inst.nodes[v].pos);
                link_power[key] = required_power_exact(eps_h, d, terms[v], inst.params);
                link_done[key] = 1;
            }
            return link_power[key];
        };

        for (int i = 0; i < g.node_count(); ++i) {
            adj[i].clear();
            for (int t : g.adj[i]) adj[i].push_back({t, power_of(g.phys[i], g.phys[t])});
        }
        const auto sp = dijkstra(adj, g.source_index());
        const int target = g.replica_index(dst, h);
        const auto expath = extract_path(sp, target);
        if (expath.empty()) continue;
        if (sp.dist[target] < best_total) {
            best_total = sp.dist[target];
            best_path.clear();
            for (int idx : expath) best_path.push_back(g.phys[idx]);
            best_powers.clear();
            for (std::size_t k = 0; k + 1 < best_path.size(); ++k)
                best_powers.push_back(power_of(best_path[k], best_path[k + 1]));
        }
    }
    return finish_plan(Algorithm::MER_EQ, inst, best_path, best_powers);
}

RoutePlan mer_route(const NetworkInstance& inst, double pi) {
    return mer_route(inst, pi, inst.source, inst.dest);
}

RoutePlan mer_route(const NetworkInstance& inst, double pi, int src, int dst) {
    inst.validate();
    check_pi(pi);
    check_endpoints(inst, src, dst);

    // route as if no jammers existed
    const auto adj = complete_graph_adjacency(inst, /*jamming_aware=*/false);
    const auto sp = dijkstra(adj, src);
    const auto path = extract_path(sp, dst);

    // jammer-free optimal outage split along that path...
    std::vector<double> weights, dists;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const double d = distance(inst.nodes[path[k]].pos, inst.nodes[path[k + 1]].pos);
        dists.push_back(d);
        weights.push_back(mer_link_weight(d, inst.params));
    }
    const auto free_powers =
        allocate_powers_approx(weights, epsilon_budget(pi, inst.params.gamma));

    // ...then raise each power so the same targets still hold under jamming
    std::vector<double> powers(free_powers.size());
    for (std::size_t k = 0; k < free_powers.size(); ++k) {
        const double d_alpha = std::pow(dists[k], inst.params.alpha);
        const double target = -std::expm1(
            -inst.params.gamma * inst.params.n0 * d_alpha / free_powers[k]);
        const auto terms = jammer_terms_at(inst, path[k + 1]);
        powers[k] = required_power_exact(target, dists[k], terms, inst.params);
    }
    return finish_plan(Algorithm::MER, inst, path, powers);
}

} // namespace jamnet
