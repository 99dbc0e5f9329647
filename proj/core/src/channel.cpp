#include "jamnet/channel.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "jamnet/errors.hpp"

namespace jamnet {

namespace {

constexpr double kOutageFloor = 1e-12;          // accepted target range
constexpr double kOutageCeil = 1.0 - 1e-12;     // avoids log/exp overflow
constexpr double kBisectRelTol = 1e-10;
constexpr int kBisectMaxIter = 200;

void check_positive(double v, const char* name) {
    if (!(v > 0.0)) throw std::domain_error(std::string(name) + " must be > 0");
}

void check_target(double target) {
    if (!(target >= kOutageFloor && target <= kOutageCeil))
        throw std::domain_error("target outage must lie in [1e-12, 1-1e-12]");
}

// sum_j ln(q/(1+x_j) + 1-q) at transmit power p; <= 0 always
double log_jam_factor(double p_tx, double d_alpha,
                      std::span<const JammerTerm> jammer_terms,
                      const ChannelParams& cp) {
    double log_f = 0.0;
    for (const JammerTerm& t : jammer_terms) {
        const double x =
            cp.gamma * (t.power / std::pow(t.dist, cp.alpha)) / (p_tx / d_alpha);
        if (cp.q == 1.0)
            log_f -= std::log1p(x);
        else
            log_f += std::log(cp.q / (1.0 + x) + (1.0 - cp.q));
    }
    return log_f;
}

} // namespace

double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

void ChannelParams::validate() const {
    if (!(alpha >= 1.0)) throw std::domain_error("alpha must be >= 1");
    check_positive(n0, "n0");
    check_positive(gamma, "gamma");
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("q must be in [0,1]");
}

void NetworkInstance::validate() const {
    params.validate();
    const int n = size();
    if (n < 2) throw std::domain_error("instance needs at least 2 nodes");
    std::set<int> ids;
    for (const Node& node : nodes) ids.insert(node.id);
    if (static_cast<int>(ids.size()) != n || *ids.begin() != 0 || *ids.rbegin() != n - 1)
        throw std::domain_error("node ids must be unique and dense 0..N-1");
    if (source < 0 || source >= n || dest < 0 || dest >= n)
        throw std::domain_error("source/dest out of range");
    if (source == dest) throw std::domain_error("source and dest must differ");
    for (const Jammer& j : jammers) {
        check_positive(j.power, "jammer power");
        for (const Node& node : nodes)
            if (distance(j.pos, node.pos) == 0.0)
                throw std::domain_error("jammer colocated with a node (singular geometry)");
    }
}

double sir_threshold(double rho) {
    if (rho < 0.0) throw std::domain_error("throughput rho must be >= 0");
    return std::exp2(rho) - 1.0;
}

double aggregate_jamming(const Point& rx_pos, std::span<const Jammer> jammers,
                         const ChannelParams& params) {
    params.validate();
    double sum = 0.0;
    for (const Jammer& j : jammers) {
        const double d = distance(rx_pos, j.pos);
        if (d == 0.0)
            throw std::domain_error("receiver colocated with a jammer (singular geometry)");
        sum += j.power / std::pow(d, params.alpha);
    }
    return params.q * sum;
}

double link_outage_exact(double p_tx, double geom_d,
                         std::span<const JammerTerm> jammer_terms,
                         const ChannelParams& params) {
    check_positive(p_tx, "transmit power");
    check_positive(geom_d, "link distance");
    for (const JammerTerm& t : jammer_terms) {
        check_positive(t.power, "jammer power");
        check_positive(t.dist, "jammer distance");
    }
    const double d_alpha = std::pow(geom_d, params.alpha);
    const double z = params.gamma * params.n0 * d_alpha / p_tx;
    const double log_f = log_jam_factor(p_tx, d_alpha, jammer_terms, params);
    // 1 - e^{-z} e^{log_f} without cancellation near 0
    return -std::expm1(-z + log_f);
}

double link_outage_approx(double p_tx, const LinkGeometry& geom,
                          const ChannelParams& params) {
    check_positive(p_tx, "transmit power");
    check_positive(geom.d, "link distance");
    if (geom.jam < 0.0) throw std::domain_error("aggregate jamming must be >= 0");
    // same operation order as the exact form so J = 0 matches it bitwise
    const double d_alpha = std::pow(geom.d, params.alpha);
    return -std::expm1(-params.gamma * (params.n0 + geom.jam) * d_alpha / p_tx);
}

double required_power_exact(double target_outage, double geom_d,
                            std::span<const JammerTerm> jammer_terms,
                            const ChannelParams& params) {
    check_target(target_outage);
    check_positive(geom_d, "link distance");
    const double d_alpha = std::pow(geom_d, params.alpha);
    const double p_free =
        params.gamma * params.n0 * d_alpha / (-std::log1p(-target_outage));
    if (jammer_terms.empty() || params.q == 0.0) return p_free;

    // outage(p_free) >= target since jamming only raises outage; grow the
    // upper end until the target is straddled, then bisect.
    double lo = p_free;
    double hi = p_free;
    int grow = 0;
    while (link_outage_exact(hi, geom_d, jammer_terms, params) > target_outage) {
        hi *= 2.0;
        if (++grow > kBisectMaxIter || !std::isfinite(hi))
            throw ConvergenceError("required_power_exact: bracket growth failed");
    }
    for (int it = 0; it < kBisectMaxIter && (hi - lo) > kBisectRelTol * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (link_outage_exact(mid, geom_d, jammer_terms, params) > target_outage)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double required_power_approx(double target_outage, const LinkGeometry& geom,
                             const ChannelParams& params) {
    check_target(target_outage);
    check_positive(geom.d, "link distance");
    if (geom.jam < 0.0) throw std::domain_error("aggregate jamming must be >= 0");
    const double d_alpha = std::pow(geom.d, params.alpha);
    return params.gamma * (params.n0 + geom.jam) * d_alpha /
           (-std::log1p(-target_outage));
}

std::vector<JammerTerm> jammer_terms_at(const NetworkInstance& inst, int rx_node) {
    const Point& rx = inst.nodes.at(rx_node).pos;
    std::vector<JammerTerm> terms;
    terms.reserve(inst.jammers.size());
    for (const Jammer& j : inst.jammers) {
        const double d = distance(rx, j.pos);
        if (d == 0.0)
            throw std::domain_error("receiver colocated with a jammer (singular geometry)");
        terms.push_back({j.power, d});
    }
    return terms;
}

LinkGeometry link_geometry(const NetworkInstance& inst, int tx_node, int rx_node) {
    const double d = distance(inst.nodes.at(tx_node).pos, inst.nodes.at(rx_node).pos);
    return {d, aggregate_jamming(inst.nodes.at(rx_node).pos, inst.jammers, inst.params)};
}

} // namespace jamnet
