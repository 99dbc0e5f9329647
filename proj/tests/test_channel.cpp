#include "doctest.h"

#include <cmath>
#include <vector>

#include "jamnet/channel.hpp"
#include "jamnet/errors.hpp"
#include "jamnet/rng.hpp"
#include "test_util.hpp"

using namespace jamnet;

namespace {

ChannelParams params(double alpha = 2.0, double n0 = 1.0, double gamma = 1.0,
                     double q = 1.0) {
    return {alpha, n0, gamma, q};
}

// independent static-form reference: 1 - e^{-z} / prod(1 + x_j)
double static_outage_reference(double p, double d,
                               const std::vector<JammerTerm>& jam,
                               const ChannelParams& cp) {
    const double da = std::pow(d, cp.alpha);
    double denom = 1.0;
    for (const auto& t : jam)
        denom *= 1.0 + cp.gamma * (t.power / std::pow(t.dist, cp.alpha)) / (p / da);
    return 1.0 - std::exp(-cp.gamma * cp.n0 * da / p) / denom;
}

struct RandomConfig {
    double p, d;
    std::vector<JammerTerm> jam;
    ChannelParams cp;
};

RandomConfig random_config(Rng& rng, bool dynamic) {
    RandomConfig c;
    c.p = std::exp(rng.uniform(8.0) - 2.0);
    c.d = 0.2 + rng.uniform(10.0);
    c.cp = params(1.5 + rng.uniform(3.0), 0.1 + rng.uniform(2.0),
                  0.2 + rng.uniform(3.0), dynamic ? rng.uniform() : 1.0);
    const int nj = static_cast<int>(rng.uniform_index(5));
    for (int j = 0; j < nj; ++j)
        c.jam.push_back({0.1 + rng.uniform(3.0), 0.3 + rng.uniform(8.0)});
    return c;
}

} // namespace

TEST_CASE("sir_threshold") {
    CHECK(sir_threshold(1.0) == doctest::Approx(1.0));
    CHECK(sir_threshold(0.0) == doctest::Approx(0.0));
    CHECK(sir_threshold(2.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(sir_threshold(-0.1), std::domain_error);
}

TEST_CASE("aggregate_jamming") {
    const Point rx{0.0, 0.0};
    SUBCASE("single jammer inverse power law") {
        std::vector<Jammer> jam{{{2.0, 0.0}, 1.0}};
        CHECK(aggregate_jamming(rx, jam, params()) == doctest::Approx(0.25));
    }
    SUBCASE("q = 0 silences everything") {
        std::vector<Jammer> jam{{{1.0, 0.0}, 5.0}, {{0.0, 3.0}, 2.0}};
        CHECK(aggregate_jamming(rx, jam, params(2, 1, 1, 0.0)) == 0.0);
    }
    SUBCASE("linear sum with duty weighting") {
        std::vector<Jammer> jam{{{1.0, 0.0}, 1.0}, {{2.0, 0.0}, 1.0}};
        CHECK(aggregate_jamming(rx, jam, params(2, 1, 1, 0.5)) ==
              doctest::Approx(0.625).epsilon(1e-12));
    }
    SUBCASE("colocated jammer is singular") {
        std::vector<Jammer> jam{{{0.0, 0.0}, 1.0}};
        CHECK_THROWS_AS(aggregate_jamming(rx, jam, params()), std::domain_error);
    }
}

TEST_CASE("link_outage_exact closed forms") {
    SUBCASE("no jammers reduces to 1 - exp(-g N0 d^a / P)") {
        CHECK(link_outage_exact(1.0, 1.0, {}, params()) ==
              doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    }
    SUBCASE("noise-free limit with x = 1 gives 1/2") {
        std::vector<JammerTerm> jam{{1.0, 1.0}};
        CHECK(link_outage_exact(1.0, 1.0, jam, params(2, 1e-12, 1, 1)) ==
              doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(link_outage_exact(0.0, 1.0, {}, params()), std::domain_error);
        CHECK_THROWS_AS(link_outage_exact(1.0, -1.0, {}, params()), std::domain_error);
        std::vector<JammerTerm> bad{{1.0, 0.0}};
        CHECK_THROWS_AS(link_outage_exact(1.0, 1.0, bad, params()), std::domain_error);
    }
}

TEST_CASE("link_outage_exact matches Monte-Carlo sampling") {
    SUBCASE("static jammer") {
        std::vector<JammerTerm> jam{{1.0, 1.0}};
        const auto cp = params();
        const double closed = link_outage_exact(10.0, 1.0, jam, cp);
        const auto [p_hat, se] = testutil::mc_outage(10.0, 1.0, jam, cp, 1'000'000, 42);
        CHECK(std::abs(closed - p_hat) <= 3.0 * se);
    }
    SUBCASE("dynamic jammers") {
        std::vector<JammerTerm> jam{{2.0, 1.5}, {0.5, 0.7}};
        const auto cp = params(3.0, 1.0, 1.0, 0.4);
        const double closed = link_outage_exact(25.0, 1.2, jam, cp);
        const auto [p_hat, se] = testutil::mc_outage(25.0, 1.2, jam, cp, 1'000'000, 43);
        CHECK(std::abs(closed - p_hat) <= 3.0 * se);
    }
}

TEST_CASE("link_outage_approx") {
    const LinkGeometry no_jam{1.0, 0.0};
    SUBCASE("equals exact when J = 0") {
        CHECK(link_outage_approx(1.0, no_jam, params()) ==
              link_outage_exact(1.0, 1.0, {}, params()));
    }
    SUBCASE("upper-bounds the exact value") {
        std::vector<JammerTerm> jam{{1.0, 1.0}};
        const auto cp = params(2, 1e-12, 1, 1);
        const double exact = link_outage_exact(1.0, 1.0, jam, cp);
        const double approx = link_outage_approx(1.0, {1.0, 1.0}, cp);
        CHECK(approx == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
        CHECK(exact == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(approx >= exact);
    }
    SUBCASE("vanishes as P grows") {
        CHECK(link_outage_approx(1e12, {1.0, 3.0}, params()) < 1e-11);
    }
}

TEST_CASE("bound dominance and range over random configurations") {
    Rng rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto c = random_config(rng, trial % 2 == 1);
        double jam_sum = 0.0;
        for (const auto& t : c.jam)
            jam_sum += t.power / std::pow(t.dist, c.cp.alpha);
        const LinkGeometry geom{c.d, c.cp.q * jam_sum};
        const double exact = link_outage_exact(c.p, c.d, c.jam, c.cp);
        const double approx = link_outage_approx(c.p, geom, c.cp);
        REQUIRE(exact >= 0.0);
        REQUIRE(exact < 1.0);
        REQUIRE(approx >= 0.0);
        REQUIRE(approx < 1.0);
        REQUIRE(approx >= exact - 1e-12);
        if (c.jam.empty()) REQUIRE(approx == exact);
    }
}

TEST_CASE("outage monotonicity") {
    std::vector<JammerTerm> jam{{1.0, 2.0}, {0.5, 1.0}};
    const auto cp = params(2.5, 0.8, 1.3, 0.6);
    const double base = link_outage_exact(5.0, 1.5, jam, cp);
    CHECK(link_outage_exact(6.0, 1.5, jam, cp) < base);      // more power
    CHECK(link_outage_exact(5.0, 1.7, jam, cp) > base);      // longer link
    CHECK(link_outage_exact(5.0, 1.5, jam, params(2.5, 0.9, 1.3, 0.6)) > base);
    CHECK(link_outage_exact(5.0, 1.5, jam, params(2.5, 0.8, 1.5, 0.6)) > base);
    CHECK(link_outage_exact(5.0, 1.5, jam, params(2.5, 0.8, 1.3, 0.7)) > base);

    const LinkGeometry g{1.5, 0.8};
    const double approx = link_outage_approx(5.0, g, cp);
    CHECK(link_outage_approx(6.0, g, cp) < approx);
    CHECK(link_outage_approx(5.0, {1.5, 0.9}, cp) > approx);
}

TEST_CASE("dynamic form endpoints") {
    std::vector<JammerTerm> jam{{1.5, 1.2}, {0.7, 2.0}};
    SUBCASE("q = 1 equals the static product form") {
        const auto cp = params(2.2, 1.1, 0.9, 1.0);
        for (double p : {0.5, 2.0, 40.0})
            CHECK(link_outage_exact(p, 1.3, jam, cp) ==
                  doctest::Approx(static_outage_reference(p, 1.3, jam, cp))
                      .epsilon(1e-13));
    }
    SUBCASE("q = 0 equals the jammer-free expression") {
        const auto cp = params(2.2, 1.1, 0.9, 0.0);
        for (double p : {0.5, 2.0, 40.0})
            CHECK(link_outage_exact(p, 1.3, jam, cp) ==
                  link_outage_exact(p, 1.3, {}, cp));
    }
}

TEST_CASE("required_power_exact") {
    SUBCASE("closed form without jammers") {
        CHECK(required_power_exact(1.0 - std::exp(-1.0), 1.0, {}, params()) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(required_power_exact(0.1, 2.0, {}, params()) ==
              doctest::Approx(4.0 / -std::log(0.9)).epsilon(1e-12));
    }
    SUBCASE("self-consistency and grid-search bracket with a jammer") {
        std::vector<JammerTerm> jam{{1.0, 1.0}};
        const auto cp = params();
        const double p = required_power_exact(0.1, 1.0, jam, cp);
        CHECK(link_outage_exact(p, 1.0, jam, cp) == doctest::Approx(0.1).epsilon(1e-9));

        // independent bracket: scan a fine power grid for the crossing
        const double lo_guess = 1.0 / -std::log(0.9);
        double prev = lo_guess;
        double found_lo = 0.0, found_hi = 0.0;
        for (int i = 1; i <= 20000; ++i) {
            const double cand = lo_guess * std::pow(1.001, i);
            if (link_outage_exact(prev, 1.0, jam, cp) >= 0.1 &&
                link_outage_exact(cand, 1.0, jam, cp) < 0.1) {
                found_lo = prev;
                found_hi = cand;
                break;
            }
            prev = cand;
        }
        REQUIRE(found_hi > 0.0);
        CHECK(p >= found_lo);
        CHECK(p <= found_hi);
    }
    SUBCASE("rejects out-of-range targets") {
        CHECK_THROWS_AS(required_power_exact(0.0, 1.0, {}, params()), std::domain_error);
        CHECK_THROWS_AS(required_power_exact(1.0, 1.0, {}, params()), std::domain_error);
    }
}

TEST_CASE("required_power_approx") {
    SUBCASE("examples") {
        CHECK(required_power_approx(1.0 - std::exp(-1.0), {1.0, 0.0}, params()) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(required_power_approx(1.0 - std::exp(-1.0), {1.0, 3.0}, params()) ==
              doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("round-trip property") {
        Rng rng(11);
        for (int trial = 0; trial < 500; ++trial) {
            const auto cp = params(1.5 + rng.uniform(3.0), 0.1 + rng.uniform(2.0),
                                   0.2 + rng.uniform(3.0), rng.uniform());
            const LinkGeometry geom{0.2 + rng.uniform(8.0), rng.uniform(5.0)};
            const double target = 0.001 + rng.uniform(0.99);
            const double p = required_power_approx(target, geom, cp);
            CHECK(link_outage_approx(p, geom, cp) ==
                  doctest::Approx(target).epsilon(1e-12));
        }
    }
}

TEST_CASE("power inversion is an exact inverse in outage") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = random_config(rng, trial % 2 == 1);
        const double target = 0.01 + rng.uniform(0.9);
        const double p = required_power_exact(target, c.d, c.jam, c.cp);
        CHECK(std::abs(link_outage_exact(p, c.d, c.jam, c.cp) - target) <= 1e-9);
    }
}

TEST_CASE("instance validation") {
    NetworkInstance inst;
    inst.nodes = {{0, {0, 0}}, {1, {1, 0}}};
    inst.source = 0;
    inst.dest = 1;
    CHECK_NOTHROW(inst.validate());

    SUBCASE("duplicate ids") {
        inst.nodes[1].id = 0;
        CHECK_THROWS_AS(inst.validate(), std::domain_error);
    }
    SUBCASE("source equals dest") {
        inst.dest = 0;
        CHECK_THROWS_AS(inst.validate(), std::domain_error);
    }
    SUBCASE("jammer on top of a node") {
        inst.jammers.push_back({{1.0, 0.0}, 1.0});
        CHECK_THROWS_AS(inst.validate(), std::domain_error);
    }
    SUBCASE("bad params") {
        inst.params.gamma = 0.0;
        CHECK_THROWS_AS(inst.validate(), std::domain_error);
    }
}
