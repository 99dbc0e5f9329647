#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "jamnet/channel.hpp"
#include "jamnet/routing.hpp"

namespace jamnet {

// TDMA-style concurrency layer: links that share no node can transmit in
// the same slot (half duplex, one radio per node). A transmission set is a
// group of mutually schedulable links; maximal when no further network link
// fits. Random maximal sets are sampled and a small LP splits slot time
// across them to maximize the summed flow rate.

struct Link {
    int tx = 0;
    int rx = 0;
    friend auto operator<=>(const Link&, const Link&) = default;
};

struct TransmissionSet {
    std::vector<Link> links; // kept sorted (canonical form)
    bool contains_endpoint(int node) const;
};

// default rule: candidate shares no endpoint node with any scheduled link
bool schedulable(const TransmissionSet& existing, const Link& candidate);

// Optional strict variant: on top of the node-exclusive rule, every link of
// the would-be set must keep its exact outage below target + margin when
// the other concurrent transmitters are treated as additional interferers.
struct SinrPolicy {
    const NetworkInstance* inst = nullptr;
    std::vector<Link> links;            // parallel arrays: link -> power/target
    std::vector<double> powers;
    std::vector<double> outage_targets;
    double margin = 0.0;
};

bool schedulable_sinr(const TransmissionSet& existing, const Link& candidate,
                      const SinrPolicy& policy);

// Randomized greedy (uniform random link order, keep-if-schedulable) run
// `trials` times with split seeds; duplicates collapse via the canonical
// sorted form. Every returned set is verified maximal over `links`.
std::vector<TransmissionSet> maximal_transmission_sets(std::vector<Link> links,
                                                       int trials,
                                                       std::uint64_t seed);
std::vector<TransmissionSet> maximal_transmission_sets(std::vector<Link> links,
                                                       int trials,
                                                       std::uint64_t seed,
                                                       const SinrPolicy* sinr);

// Concurrent flows with fixed routes and a common per-link capacity.
struct FlowSet {
    std::vector<std::pair<int, int>> flows; // (source, dest) per flow
    std::vector<RoutePlan> routes;          // one per flow, same algorithm
    double lambda = 1.0;                    // link capacity, bits/s/Hz
};

struct Schedule {
    std::vector<TransmissionSet> sets;
    std::vector<double> weights; // time shares, >= 0, sum to 1
};

struct ThroughputSolution {
    std::vector<double> rates; // per flow
    Schedule schedule;
    double total = 0.0;
};

// max sum of flow rates s.t. per-link load <= lambda * (time share of sets
// covering the link), time shares on the simplex
ThroughputSolution max_throughput(const FlowSet& flowset,
                                  const std::vector<TransmissionSet>& sets);

double energy_per_bit(double total_power, double throughput);

} // namespace jamnet
