#include "doctest.h"

#include <cmath>
#include <vector>

#include "jamnet/errors.hpp"
#include "jamnet/netgen.hpp"
#include "jamnet/optimal.hpp"
#include "jamnet/routing.hpp"
#include "test_util.hpp"

using namespace jamnet;
using testutil::make_instance;

namespace {

GenSpec gen_spec(int n, int nj, std::uint64_t seed) {
    GenSpec s;
    s.n = n;
    s.nj = nj;
    s.side = 10.0;
    s.seed = seed;
    return s;
}

// independent path counter: bitmask-marking recursion, counts only
long long count_paths_oracle(int n, int at, int dst, unsigned visited, int hops_left) {
    if (at == dst) return 1;
    if (hops_left == 0) return 0;
    long long total = 0;
    for (int v = 0; v < n; ++v) {
        if (v == at || (visited & (1u << v))) continue;
        total += count_paths_oracle(n, v, dst, visited | (1u << v), hops_left - 1);
    }
    return total;
}

// -dg/dP for one link of the constraint, rebuilt from first principles
double neg_grad_link(double p, double b, const std::vector<double>& as, double q) {
    double s = b / (p * p);
    for (double a : as) s += q * a / ((p + a) * (p + (1.0 - q) * a));
    return s;
}

} // namespace

TEST_CASE("enumerate_paths") {
    SUBCASE("two nodes: one path") {
        const auto inst = generate_instance(gen_spec(2, 0, 1));
        const auto e = enumerate_paths(inst, {});
        REQUIRE(e.paths.size() == 1);
        CHECK(e.paths[0] == std::vector<int>{inst.source, inst.dest});
    }
    SUBCASE("complete graph on 4 nodes: 5 simple paths") {
        const auto inst = generate_instance(gen_spec(4, 0, 2));
        CHECK(enumerate_paths(inst, {}).paths.size() == 5);
    }
    SUBCASE("count matches the independent oracle at n = 8") {
        const auto inst = generate_instance(gen_spec(8, 0, 3));
        const auto e = enumerate_paths(inst, {});
        const long long expected = count_paths_oracle(
            inst.size(), inst.source, inst.dest, 1u << inst.source, inst.size() - 1);
        CHECK(static_cast<long long>(e.paths.size()) == expected);
        CHECK_FALSE(e.truncated);
    }
    SUBCASE("lexicographic order and simplicity") {
        const auto inst = generate_instance(gen_spec(6, 0, 4));
        const auto e = enumerate_paths(inst, {});
        for (std::size_t i = 1; i < e.paths.size(); ++i)
            CHECK(e.paths[i - 1] < e.paths[i]);
        for (const auto& p : e.paths) {
            std::set<int> uniq(p.begin(), p.end());
            CHECK(uniq.size() == p.size());
        }
    }
    SUBCASE("max_hops cap") {
        const auto inst = generate_instance(gen_spec(5, 0, 5));
        PathEnumConfig cfg;
        cfg.max_hops = 2;
        for (const auto& p : enumerate_paths(inst, cfg).paths)
            CHECK(p.size() <= 3);
    }
    SUBCASE("overflow policies") {
        const auto inst = generate_instance(gen_spec(8, 0, 6));
        PathEnumConfig cfg;
        cfg.max_paths = 10;
        CHECK_THROWS_AS(enumerate_paths(inst, cfg), PathOverflowError);
        cfg.on_overflow = PathEnumConfig::Overflow::Truncate;
        const auto e = enumerate_paths(inst, cfg);
        CHECK(e.truncated);
        CHECK(e.paths.size() == 10);
    }
}

TEST_CASE("optimal_power_for_path closed-form cases") {
    SUBCASE("no jammers: Lagrange allocation") {
        const auto inst = generate_instance(gen_spec(6, 0, 7));
        const auto e = enumerate_paths(inst, {});
        const double pi = 0.1;
        const double eps = epsilon_budget(pi, inst.params.gamma).eps;
        for (std::size_t pi_idx : {0u, 3u}) {
            const auto& path = e.paths[pi_idx % e.paths.size()];
            const auto powers = optimal_power_for_path(path, inst, pi);
            std::vector<double> w;
            double w_sum = 0.0;
            for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                const double d =
                    distance(inst.nodes[path[k]].pos, inst.nodes[path[k + 1]].pos);
                w.push_back(std::sqrt(inst.params.n0 * std::pow(d, inst.params.alpha)));
                w_sum += w.back();
            }
            for (std::size_t k = 0; k < powers.size(); ++k)
                CHECK(powers[k] == doctest::Approx(w[k] * w_sum / eps).epsilon(1e-8));
        }
    }
    SUBCASE("single link: equals the exact inversion") {
        const auto inst =
            make_instance({{0, 0}, {2, 1}}, {{{3, 3}, 2.0}}, {2, 1, 1, 1}, 0, 1);
        const auto powers =
            optimal_power_for_path(std::vector<int>{0, 1}, inst, 0.12);
        const auto terms = jammer_terms_at(inst, 1);
        const double d = distance(inst.nodes[0].pos, inst.nodes[1].pos);
        CHECK(powers[0] ==
              doctest::Approx(required_power_exact(0.12, d, terms, inst.params))
                  .epsilon(1e-8));
    }
}

TEST_CASE("optimal_power_for_path against a 2-D grid search") {
    auto run_case = [](const ChannelParams& cp, double pi) {
        const auto inst = make_instance({{0, 0}, {1.2, 0.3}, {2, 0}},
                                        {{{1.8, 0.6}, 2.0}}, cp, 0, 2);
        const std::vector<int> path{0, 1, 2};
        const auto powers = optimal_power_for_path(path, inst, pi);
        const double total = powers[0] + powers[1];

        // independent oracle: feasibility via the exact outage composition,
        // minimized over a fine log-spaced grid around the bound allocation
        std::vector<double> center;
        {
            const EpsilonBudget budget = epsilon_budget(pi, cp.gamma);
            std::vector<double> w;
            for (int k = 0; k < 2; ++k)
                w.push_back(merap_link_weight(link_geometry(inst, path[k], path[k + 1]),
                                              cp));
            center = allocate_powers_approx(w, budget);
        }
        const int grid = 2000;
        const double span = 2.5; // range ratio 6.25: ~0.09% per step
        auto grid_point = [&](double c, int i) {
            return c / span * std::pow(span * span, double(i) / (grid - 1));
        };
        const auto terms1 = jammer_terms_at(inst, path[1]);
        const auto terms2 = jammer_terms_at(inst, path[2]);
        const double d1 = distance(inst.nodes[path[0]].pos, inst.nodes[path[1]].pos);
        const double d2 = distance(inst.nodes[path[1]].pos, inst.nodes[path[2]].pos);

        double best = std::numeric_limits<double>::infinity();
        int best_i = -1, best_j = -1;
        std::vector<double> out1(grid), out2(grid), p1s(grid), p2s(grid);
        for (int i = 0; i < grid; ++i) {
            p1s[i] = grid_point(center[0], i);
            p2s[i] = grid_point(center[1], i);
            out1[i] = link_outage_exact(p1s[i], d1, terms1, cp);
            out2[i] = link_outage_exact(p2s[i], d2, terms2, cp);
        }
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double tot = p1s[i] + p2s[j];
                if (tot >= best) continue;
                const double e2e = 1.0 - (1.0 - out1[i]) * (1.0 - out2[j]);
                if (e2e <= pi) {
                    best = tot;
                    best_i = i;
                    best_j = j;
                }
            }
        REQUIRE(best_i > 0);
        REQUIRE(best_i < grid - 1); // optimum interior to the grid range
        REQUIRE(best_j > 0);
        REQUIRE(best_j < grid - 1);
        CHECK(total <= best * (1.0 + 1e-7)); // solver at least as good
        CHECK(best <= total * (1.0 + 1e-3)); // and the grid confirms it
    };
    SUBCASE("static jammer") { run_case({2.5, 0.8, 1.3, 1.0}, 0.15); }
    SUBCASE("dynamic jammer") { run_case({2.0, 1.0, 1.0, 0.6}, 0.1); }
}

TEST_CASE("optimal solution satisfies KKT stationarity and the constraint") {
    for (std::uint64_t seed : {10u, 11u}) {
        const auto inst = generate_instance(gen_spec(7, 6, seed));
        const double pi = 0.1;
        const auto e = enumerate_paths(inst, {});
        // probe a few multi-hop paths
        int probed = 0;
        for (const auto& path : e.paths) {
            if (path.size() < 3) continue;
            if (++probed > 4) break;
            const auto powers = optimal_power_for_path(path, inst, pi);

            double g = 0.0;
            std::vector<double> grads;
            for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                const double d =
                    distance(inst.nodes[path[k]].pos, inst.nodes[path[k + 1]].pos);
                const double da = std::pow(d, inst.params.alpha);
                const double b = inst.params.gamma * inst.params.n0 * da;
                std::vector<double> as;
                for (const auto& jam : inst.jammers) {
                    const double dj = distance(inst.nodes[path[k + 1]].pos, jam.pos);
                    as.push_back(inst.params.gamma * jam.power * da /
                                 std::pow(dj, inst.params.alpha));
                }
                g += b / powers[k];
                for (double a : as) {
                    const double x = a / powers[k];
                    g -= std::log(inst.params.q / (1.0 + x) + 1.0 - inst.params.q);
                }
                grads.push_back(neg_grad_link(powers[k], b, as, inst.params.q));
            }
            CHECK(g == doctest::Approx(-std::log1p(-pi)).epsilon(1e-8));
            // one multiplier fits all links: lambda_k = 1/s_k agree
            for (std::size_t k = 1; k < grads.size(); ++k)
                CHECK(1.0 / grads[k] == doctest::Approx(1.0 / grads[0]).epsilon(1e-7));
        }
    }
}

TEST_CASE("brute_force_route") {
    SUBCASE("two nodes") {
        const auto inst =
            make_instance({{0, 0}, {3, 4}}, {{{7, 7}, 1.0}}, {2, 1, 1, 1}, 0, 1);
        const auto plan = brute_force_route(inst, 0.1, {});
        const auto terms = jammer_terms_at(inst, 1);
        CHECK(plan.powers[0] ==
              doctest::Approx(required_power_exact(0.1, 5.0, terms, inst.params))
                  .epsilon(1e-8));
        CHECK(plan.algorithm == Algorithm::OPTIMAL);
    }
    SUBCASE("no jammers: reduces to the jamming-oblivious closed form") {
        const auto inst = generate_instance(gen_spec(7, 0, 12));
        const auto bf = brute_force_route(inst, 0.1, {});
        const auto mer = mer_route(inst, 0.1);
        CHECK(bf.total_power == doctest::Approx(mer.total_power).epsilon(1e-7));
        CHECK(bf.e2e_outage == doctest::Approx(0.1).epsilon(1e-8));
    }
    SUBCASE("dominates every heuristic on each instance") {
        for (std::uint64_t seed : {13u, 14u, 15u}) {
            const auto inst = generate_instance(gen_spec(8, 8, seed));
            const double pi = 0.1;
            const auto bf = brute_force_route(inst, pi, {});
            CHECK(bf.e2e_outage == doctest::Approx(pi).epsilon(1e-8));
            const double slack = 1.0 - 1e-7;
            CHECK(merap_route(inst, pi).total_power >= bf.total_power * slack);
            CHECK(mereq_route(inst, pi).total_power >= bf.total_power * slack);
            CHECK(mer_route(inst, pi).total_power >= bf.total_power * slack);
        }
    }
    SUBCASE("deterministic") {
        const auto inst = generate_instance(gen_spec(7, 5, 16));
        const auto a = brute_force_route(inst, 0.1, {});
        const auto b = brute_force_route(inst, 0.1, {});
        CHECK(a.nodes == b.nodes);
        CHECK(a.powers == b.powers);
    }
}
