#include "jamnet/scheduling.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "jamnet/lp.hpp"
#include "jamnet/rng.hpp"

namespace jamnet {

namespace {

std::vector<Link> canonical(std::vector<Link> links) {
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
    return links;
}

bool sinr_feasible(const std::vector<Link>& active, const SinrPolicy& policy) {
    const NetworkInstance& inst = *policy.inst;
    auto lookup = [&](const Link& l) -> std::size_t {
        for (std::size_t i = 0; i < policy.links.size(); ++i)
            if (policy.links[i] == l) return i;
        throw std::domain_error("schedulable_sinr: link missing from policy tables");
    };
    for (const Link& l : active) {
        const std::size_t li = lookup(l);
        auto terms = jammer_terms_at(inst, l.rx);
        for (const Link& other : active) {
            if (other == l) continue;
            terms.push_back({policy.powers[lookup(other)],
                             distance(inst.nodes[other.tx].pos, inst.nodes[l.rx].pos)});
        }
        const double d = distance(inst.nodes[l.tx].pos, inst.nodes[l.rx].pos);
        const double outage = link_outage_exact(policy.powers[li], d, terms, inst.params);
        if (outage > policy.outage_targets[li] + policy.margin) return false;
    }
    return true;
}

} // namespace

bool TransmissionSet::contains_endpoint(int node) const {
    for (const Link& l : links)
        if (l.tx == node || l.rx == node) return true;
    return false;
}

bool schedulable(const TransmissionSet& existing, const Link& candidate) {
    if (candidate.tx == candidate.rx)
        throw std::domain_error("schedulable: self-loop is not a link");
    return !existing.contains_endpoint(candidate.tx) &&
           !existing.contains_endpoint(candidate.rx);
}

bool schedulable_sinr(const TransmissionSet& existing, const Link& candidate,
                      const SinrPolicy& policy) {
    if (!schedulable(existing, candidate)) return false;
    if (policy.inst == nullptr)
        throw std::domain_error("schedulable_sinr: policy has no instance");
    std::vector<Link> active = existing.links;
    active.push_back(candidate);
    return sinr_feasible(active, policy);
}

std::vector<TransmissionSet> maximal_transmission_sets(std::vector<Link> links,
                                                       int trials,
                                                       std::uint64_t seed) {
    return maximal_transmission_sets(std::move(links), trials, seed, nullptr);
}

std::vector<TransmissionSet> maximal_transmission_sets(std::vector<Link> links,
                                                       int trials,
                                                       std::uint64_t seed,
                                                       const SinrPolicy* sinr) {
    if (trials < 1) throw std::domain_error("maximal_transmission_sets: trials must be >= 1");
    links = canonical(std::move(links));
    auto fits = [&](const TransmissionSet& s, const Link& l) {
        return sinr ? schedulable_sinr(s, l, *sinr) : schedulable(s, l);
    };

    std::set<std::vector<Link>> unique_sets;
    std::vector<std::size_t> order(links.size());
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(trial)));
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        // Fisher-Yates: process links in a uniformly random order
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_index(i)]);

        TransmissionSet s;
        for (std::size_t idx : order)
            if (fits(s, links[idx])) s.links.push_back(links[idx]);
        std::sort(s.links.begin(), s.links.end());

        // single-pass greediness already implies maximality; verify anyway
        for (const Link& l : links)
            if (std::find(s.links.begin(), s.links.end(), l) == s.links.end() && fits(s, l))
                throw std::logic_error("maximal_transmission_sets: produced a non-maximal set");
        unique_sets.insert(s.links);
    }

    std::vector<TransmissionSet> out;
    out.reserve(unique_sets.size());
    for (const auto& links_sorted : unique_sets) out.push_back({links_sorted});
    return out;
}

ThroughputSolution max_throughput(const FlowSet& flowset,
                                  const std::vector<TransmissionSet>& sets) {
    const int num_flows = static_cast<int>(flowset.flows.size());
    const int num_sets = static_cast<int>(sets.size());
    if (flowset.routes.size() != flowset.flows.size())
        throw std::domain_error("max_throughput: one route per flow required");
    if (!(flowset.lambda > 0.0)) throw std::domain_error("max_throughput: lambda must be > 0");
    if (num_sets == 0) throw std::domain_error("max_throughput: need at least one set");

    // collect the links each flow traverses
    std::map<Link, std::vector<int>> flows_on_link;
    for (int f = 0; f < num_flows; ++f) {
        const auto& nodes = flowset.routes[f].nodes;
        for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
            flows_on_link[{nodes[k], nodes[k + 1]}].push_back(f);
    }

    // variables: x_0..x_{F-1}, alpha_0..alpha_{M-1}
    const int nvar = num_flows + num_sets;
    LpProblem lp;
    lp.c.assign(nvar, 0.0);
    for (int f = 0; f < num_flows; ++f) lp.c[f] = 1.0;

    for (const auto& [link, flows] : flows_on_link) {
        std::vector<double> row(nvar, 0.0);
        for (int f : flows) row[f] = 1.0;
        for (int s = 0; s < num_sets; ++s)
            if (std::binary_search(sets[s].links.begin(), sets[s].links.end(), link))
                row[num_flows + s] = -flowset.lambda;
        lp.add_row(std::move(row), LpRelation::LessEqual, 0.0);
    }
    {
        std::vector<double> row(nvar, 0.0);
        for (int s = 0; s < num_sets; ++s) row[num_flows + s] = 1.0;
        lp.add_row(std::move(row), LpRelation::Equal, 1.0);
    }

    const LpSolution sol = solve_lp(lp);

    ThroughputSolution out;
    out.rates.assign(sol.x.begin(), sol.x.begin() + num_flows);
    out.schedule.sets = sets;
    out.schedule.weights.assign(sol.x.begin() + num_flows, sol.x.end());
    out.total = sol.objective;
    return out;
}

double energy_per_bit(double total_power, double throughput) {
    if (!(throughput > 0.0)) throw std::domain_error("energy_per_bit: throughput must be > 0");
    return total_power / throughput;
}

} // namespace jamnet
