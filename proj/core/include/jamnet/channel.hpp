#pragma once

#include <span>
#include <vector>

namespace jamnet {

// Link model: Rayleigh block fading with unit mean power on every
// transmitter-receiver and jammer-receiver channel, additive noise N0, and
// a decoding SIR threshold gamma. A link is in outage when
//
//   P |h|^2 / d^a  <  gamma * (N0 + sum_j Pj bj |hj|^2 / djk^a),
//
// with |h|^2, |hj|^2 ~ Exp(1) and bj ~ Bernoulli(q) the jammer duty cycle
// (q = 1: always on). Averaging over all fading and duty draws gives the
// closed forms implemented here.

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct ChannelParams {
    double alpha = 2.0; // path-loss exponent, >= 1
    double n0 = 1.0;    // noise power, > 0
    double gamma = 1.0; // SIR threshold, > 0
    double q = 1.0;     // jammer ON-probability, in [0,1]; 1 = static

    void validate() const; // throws std::domain_error on violation
};

struct Node {
    int id = 0;
    Point pos;
};

struct Jammer {
    Point pos;
    double power = 1.0; // > 0
};

// Immutable world state: nodes, jammers, channel parameters, endpoints.
// The link set is implicit: any ordered pair of distinct nodes is a
// candidate link.
struct NetworkInstance {
    std::vector<Node> nodes;
    std::vector<Jammer> jammers;
    ChannelParams params;
    int source = 0;
    int dest = 1;

    int size() const { return static_cast<int>(nodes.size()); }
    void validate() const; // ids dense 0..N-1, endpoints valid, params valid
};

// Receiver-side geometry of one link: distance to the transmitter and the
// duty-weighted expected jamming power at the receiver.
struct LinkGeometry {
    double d = 1.0;   // > 0
    double jam = 0.0; // q * sum_j Pj / djk^a, >= 0
};

// One jammer as seen from a specific receiver.
struct JammerTerm {
    double power = 1.0; // Pj
    double dist = 1.0;  // d_{j,k} > 0
};

// gamma = 2^rho - 1 for a target throughput of rho bits/s/Hz
double sir_threshold(double rho);

// Duty-weighted expected jamming power at rx_pos: q * sum_j Pj / d^a.
// Throws std::domain_error if rx_pos coincides with a jammer position.
double aggregate_jamming(const Point& rx_pos, std::span<const Jammer> jammers,
                         const ChannelParams& params);

// Exact expected link outage,
//   p = 1 - e^{-g N0 d^a / P} * prod_j [ q/(1+x_j) + 1-q ],
//   x_j = g (Pj/djk^a) / (P/d^a).
double link_outage_exact(double p_tx, double geom_d,
                         std::span<const JammerTerm> jammer_terms,
                         const ChannelParams& params);

// Exponential upper bound, p <= 1 - e^{-g d^a (N0 + J) / P}; meets the
// exact value when J = 0 and needs only the measured aggregate J.
double link_outage_approx(double p_tx, const LinkGeometry& geom,
                          const ChannelParams& params);

// Invert link_outage_exact in P by bracketed bisection (relative tolerance
// 1e-10, 200-iteration cap). The outage is strictly decreasing in P so the
// root is unique. Throws ConvergenceError if the bracket cannot be closed.
double required_power_exact(double target_outage, double geom_d,
                            std::span<const JammerTerm> jammer_terms,
                            const ChannelParams& params);

// Closed-form inverse of the bound: P = g d^a (N0+J) / (-ln(1-target)).
double required_power_approx(double target_outage, const LinkGeometry& geom,
                             const ChannelParams& params);

// ---- instance helpers used by the routing layers ----

// (Pj, djk) pairs for the receiver node; rejects colocated jammers.
std::vector<JammerTerm> jammer_terms_at(const NetworkInstance& inst, int rx_node);

// Geometry of the directed link tx -> rx (jamming evaluated at rx).
LinkGeometry link_geometry(const NetworkInstance& inst, int tx_node, int rx_node);

} // namespace jamnet
