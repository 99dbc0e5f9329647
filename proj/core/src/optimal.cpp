#include "jamnet/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "jamnet/errors.hpp"

namespace jamnet {

namespace {

constexpr double kInnerRelTol = 1e-12;
constexpr double kOuterTol = 1e-10; // on the constraint value
constexpr int kMaxIter = 200;

// Per-link constants of the constraint
//   g(P) = sum_k [ b_k / P_k - sum_j ln F_jk(P_k) ],
//   F = q/(1 + a/P) + 1-q,  b_k = g*N0*d_k^a,  a_jk = g*Pj*d_k^a/djk^a,
// which is -ln(1 - e2e outage) for the path.
struct LinkTerms {
    double b = 0.0;
    std::vector<double> a;
    double a_sum = 0.0;
};

double constraint_term(const LinkTerms& lt, double p, double q) {
    double v = lt.b / p;
    for (double a : lt.a) {
        const double x = a / p;
        v -= q == 1.0 ? -std::log1p(x) : std::log(q / (1.0 + x) + (1.0 - q));
    }
    return v;
}

// -dg/dP_k: b/P^2 + sum_j q a / ((P+a)(P+(1-q)a)); strictly decreasing in P
double neg_gradient(const LinkTerms& lt, double p, double q) {
    double s = lt.b / (p * p);
    for (double a : lt.a) s += q * a / ((p + a) * (p + (1.0 - q) * a));
    return s;
}

// unique P with -dg/dP = t, bracketed by sqrt(b/t) <= P <= sqrt((b+q*sum a)/t)
double stationary_power(const LinkTerms& lt, double t, double q) {
    double lo = std::sqrt(lt.b / t);
    double hi = std::sqrt((lt.b + q * lt.a_sum) / t);
    if (hi <= lo) return lo;
    for (int it = 0; it < kMaxIter && (hi - lo) > kInnerRelTol * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (neg_gradient(lt, mid, q) > t)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<LinkTerms> path_terms(const std::vector<int>& path,
                                  const NetworkInstance& inst) {
    std::vector<LinkTerms> terms;
    terms.reserve(path.size() - 1);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const int tx = path[k];
        const int rx = path[k + 1];
        const double d = distance(inst.nodes[tx].pos, inst.nodes[rx].pos);
        const double d_alpha = std::pow(d, inst.params.alpha);
        LinkTerms lt;
        lt.b = inst.params.gamma * inst.params.n0 * d_alpha;
        for (const Jammer& j : inst.jammers) {
            const double dj = distance(inst.nodes[rx].pos, j.pos);
            if (dj == 0.0)
                throw std::domain_error("receiver colocated with a jammer (singular geometry)");
            const double a = inst.params.gamma * j.power * d_alpha / std::pow(dj, inst.params.alpha);
            lt.a.push_back(a);
            lt.a_sum += a;
        }
        terms.push_back(std::move(lt));
    }
    return terms;
}

void enumerate_rec(const std::vector<int>& order, int dst, int max_hops,
                   const PathEnumConfig& cfg, std::vector<int>& cur,
                   std::vector<char>& used, PathEnumeration& out) {
    const int at = cur.back();
    if (at == dst) {
        if (out.truncated) return;
        if (static_cast<long long>(out.paths.size()) >= cfg.max_paths) {
            if (cfg.on_overflow == PathEnumConfig::Overflow::Error)
                throw PathOverflowError("enumerate_paths: budget of " +
                                        std::to_string(cfg.max_paths) + " paths exceeded");
            out.truncated = true;
            return;
        }
        out.paths.push_back(cur);
        return;
    }
    if (static_cast<int>(cur.size()) - 1 >= max_hops) return;
    for (int next : order) {
        if (used[next]) continue;
        used[next] = 1;
        cur.push_back(next);
        enumerate_rec(order, dst, max_hops, cfg, cur, used, out);
        cur.pop_back();
        used[next] = 0;
        if (out.truncated) return;
    }
}

} // namespace

PathEnumeration enumerate_paths(const NetworkInstance& inst, const PathEnumConfig& cfg) {
    return enumerate_paths(inst, cfg, inst.source, inst.dest);
}

PathEnumeration enumerate_paths(const NetworkInstance& inst, const PathEnumConfig& cfg,
                                int src, int dst) {
    inst.validate();
    if (cfg.max_hops == 0 || cfg.max_paths < 1)
        throw std::domain_error("enumerate_paths: caps must be >= 1");
    const int n = inst.size();
    const int max_hops = cfg.max_hops < 0 ? n - 1 : std::min(cfg.max_hops, n - 1);

    std::vector<int> order;
    for (int v = 0; v < n; ++v)
        if (v != src) order.push_back(v); // ascending: lexicographic emit order

    PathEnumeration out;
    std::vector<int> cur{src};
    std::vector<char> used(n, 0);
    used[src] = 1;
    enumerate_rec(order, dst, max_hops, cfg, cur, used, out);
    return out;
}

std::vector<double> optimal_power_for_path(const std::vector<int>& path,
                                           const NetworkInstance& inst, double pi) {
    inst.validate();
    if (!(pi >= 1e-12 && pi <= 1.0 - 1e-12))
        throw std::domain_error("outage target pi must lie in [1e-12, 1-1e-12]");
    if (path.size() < 2) throw std::domain_error("optimal_power_for_path: need >= 2 nodes");

    const double q = inst.params.q;
    const auto terms = path_terms(path, inst);
    const double target = -std::log1p(-pi); // required constraint value

    auto solve_at = [&](double lambda, std::vector<double>& powers) {
        const double t = 1.0 / lambda;
        double g = 0.0;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            powers[k] = stationary_power(terms[k], t, q);
            g += constraint_term(terms[k], powers[k], q);
        }
        return g;
    };

    // seed lambda from the exponential-bound allocation and bracket by
    // geometric growth; g(P(lambda)) is strictly decreasing in lambda
    double w_sum = 0.0;
    for (const auto& lt : terms) w_sum += std::sqrt(lt.b + q * lt.a_sum);
    double lambda = w_sum * w_sum / (target * target);

    std::vector<double> powers(terms.size());
    double lo, hi;
    if (solve_at(lambda, powers) > target) {
        lo = lambda;
        do {
            lambda *= 4.0;
            if (!std::isfinite(lambda))
                throw ConvergenceError("optimal_power_for_path: lambda bracket overflow");
        } while (solve_at(lambda, powers) > target);
        hi = lambda;
    } else {
        hi = lambda;
        do {
            lambda *= 0.25;
            if (lambda <= 0.0)
                throw ConvergenceError("optimal_power_for_path: lambda bracket underflow");
        } while (solve_at(lambda, powers) <= target);
        lo = lambda;
    }

    double g = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
        lambda = 0.5 * (lo + hi);
        g = solve_at(lambda, powers);
        if (std::abs(g - target) <= kOuterTol) return powers;
        if (g > target)
            lo = lambda;
        else
            hi = lambda;
    }
    std::ostringstream os;
    os << "optimal_power_for_path: no convergence after " << kMaxIter
       << " outer iterations (|g-target| = " << std::abs(g - target) << ")";
    throw ConvergenceError(os.str());
}

RoutePlan brute_force_route(const NetworkInstance& inst, double pi,
                            const PathEnumConfig& cfg) {
    return brute_force_route(inst, pi, cfg, inst.source, inst.dest);
}

RoutePlan brute_force_route(const NetworkInstance& inst, double pi,
                            const PathEnumConfig& cfg, int src, int dst) {
    const auto enumeration = enumerate_paths(inst, cfg, src, dst);

    double best_total = std::numeric_limits<double>::infinity();
    const std::vector<int>* best_path = nullptr;
    std::vector<double> best_powers;
    for (const auto& path : enumeration.paths) {
        auto powers = optimal_power_for_path(path, inst, pi);
        double total = 0.0;
        for (double p : powers) total += p;
        if (total < best_total) {
            best_total = total;
            best_path = &path;
            best_powers = std::move(powers);
        }
    }
    if (best_path == nullptr)
        throw std::domain_error("brute_force_route: no source-destination path enumerated");

    RoutePlan plan;
    plan.algorithm = Algorithm::OPTIMAL;
    plan.nodes = *best_path;
    plan.powers = best_powers;
    for (std::size_t k = 0; k + 1 < plan.nodes.size(); ++k) {
        const int tx = plan.nodes[k];
        const int rx = plan.nodes[k + 1];
        const double d = distance(inst.nodes[tx].pos, inst.nodes[rx].pos);
        const auto jterms = jammer_terms_at(inst, rx);
        plan.link_outages.push_back(
            link_outage_exact(plan.powers[k], d, jterms, inst.params));
        plan.total_power += plan.powers[k];
    }
    plan.e2e_outage = end_to_end_outage(plan.link_outages);
    plan.validate();
    return plan;
}

} // namespace jamnet
