#include <doctest.h>

#include <cmath>

#include "vt/distribution.hpp"
#include "vt/equilibrium.hpp"
#include "vt/errors.hpp"
#include "vt/rng.hpp"

using namespace vt;

namespace {

constexpr double kPi = 3.14159265358979323846;

JointUtilityDistribution eq10() {
    return JointUtilityDistribution::quadrant_constant({0.1, 0.4, 0.3, 0.2});
}

// fixed point of the Theorem-1 map for eq10 at n=11, computed independently
// with exact wedge-area formulas and a damped iteration run to 1e-12
constexpr double kEq10Tans[8] = {0.86198301, 0.23916568, 0.23056635, 0.83098992,
                                 4.7799822,  1.33788589, 1.03376059, 3.6934071};

// same for the alpha=4 product-power density (1D quadrature oracle)
constexpr double kPower4Tans[8] = {0.569542621, 0.671152157, 2.788395166, 2.36624419,
                                   0.569542621, 2.36624419,  2.788395166, 0.671152157};

}  // namespace

TEST_CASE("pivot probability closed forms") {
    CHECK(pivot_probability(0.5, 0.5, 11) == doctest::Approx(126.0 / 512).epsilon(1e-14));
    CHECK(pivot_probability(0.3, 0.7, 3) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(pivot_probability(0.62, 0.38, 3) == doctest::Approx(0.62).epsilon(1e-14));
    CHECK_THROWS_AS(pivot_probability(0.5, 0.5, 10), domain_error);
    CHECK_THROWS_AS(pivot_probability(0.5, 0.5, 1), domain_error);
    CHECK_THROWS_AS(pivot_probability(0.6, 0.6, 11), domain_error);
}

TEST_CASE("pivot probability matches exhaustive enumeration of voter signs") {
    // all 2^9 sign patterns of the 9 non-trading voters, n=11
    const double qm = 0.7, qp = 0.3;
    double exact = 0.0;
    for (int pattern = 0; pattern < 512; ++pattern) {
        int minuses = 0;
        for (int b = 0; b < 9; ++b)
            if (pattern & (1 << b)) ++minuses;
        if (minuses == 5) exact += std::pow(qm, 5) * std::pow(qp, 4);
    }
    CHECK(pivot_probability(qm, qp, 11) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(exact == doctest::Approx(126.0 * std::pow(0.7, 5) * std::pow(0.3, 4)).epsilon(1e-12));
}

TEST_CASE("trade expected value for uniform at the naive profile") {
    const auto uni = JointUtilityDistribution::uniform();
    const StrategyProfile naive = StrategyProfile::naive();
    const double v = trade_expected_value(uni, naive, 11, 1, {0.8, 0.2}, TradeMode::Myopic);
    CHECK(v == doctest::Approx(0.14765625).epsilon(1e-8));
    // boundary of R1 at theta=pi/4
    const double b = trade_expected_value(uni, naive, 11, 1, {0.55, 0.55}, TradeMode::Myopic);
    CHECK(std::abs(b) < 1e-10);
    // mirrored pair flips the sign
    const double m = trade_expected_value(uni, naive, 11, 1, {0.2, 0.8}, TradeMode::Myopic);
    CHECK(m == doctest::Approx(-0.14765625).epsilon(1e-8));
}

TEST_CASE("trade value rejects pairs outside the type's quadrant") {
    const auto uni = JointUtilityDistribution::uniform();
    const auto model = make_trade_model(uni, StrategyProfile::naive(), 11, TradeMode::Myopic);
    CHECK_THROWS_AS(model.value(1, {-0.5, 0.5}), domain_error);
    CHECK_THROWS_AS(model.value(3, {0.5, -0.5}), domain_error);
    CHECK_THROWS_AS(model.value(0, {0.5, 0.5}), domain_error);
}

TEST_CASE("trade value is monotone in the gained and given coordinates") {
    const auto d = eq10();
    const auto model = make_trade_model(d, StrategyProfile::naive(), 11, TradeMode::Myopic);
    RngStream rng(3, 0);
    for (int k = 0; k < 100; ++k) {
        const double x = rng.uniform(0.05, 0.9);
        const double y = rng.uniform(0.05, 0.9);
        const double dx = rng.uniform(0.01, 0.09);
        CHECK(model.value(1, {x + dx, y}) > model.value(1, {x, y}));
        CHECK(model.value(1, {x, y + dx}) < model.value(1, {x, y}));
    }
}

TEST_CASE("no-partner error when the complementary side is empty") {
    const auto uni = JointUtilityDistribution::uniform();
    StrategyProfile p = StrategyProfile::naive();
    p[4] = p[5] = p[6] = p[7] = 0.0;  // no player-2 offers anywhere
    const auto model = make_trade_model(uni, p, 11, TradeMode::Myopic);
    CHECK_THROWS_AS(model.value(1, {0.5, 0.2}), no_partner_error);
    CHECK(model.value(5, {0.2, 0.5}) > 0.0);  // partner side S1 still populated
}

TEST_CASE("best response fixes the naive profile for symmetric densities") {
    const JointUtilityDistribution dists[] = {
        JointUtilityDistribution::uniform(),
        JointUtilityDistribution::product_tent(),
        JointUtilityDistribution::product_vee(),
    };
    for (const auto& d : dists) {
        for (TradeMode mode : {TradeMode::Myopic, TradeMode::Groupwide}) {
            const BestResponseResult br = best_response(d, StrategyProfile::naive(), 11, mode);
            for (int i = 0; i < 8; ++i) {
                CHECK(br.defined[i]);
                CHECK(br.theta[i] == doctest::Approx(kPi / 4).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("best response moves away from naive for the asymmetric density") {
    const BestResponseResult br = best_response(eq10(), StrategyProfile::naive(), 11,
                                                TradeMode::Myopic);
    CHECK(std::abs(br.theta[1] - kPi / 4) > 0.3);  // theta_2 drops sharply
    CHECK(std::tan(br.theta[0]) == doctest::Approx(1.4 * 0.6970).epsilon(1e-3));
}

TEST_CASE("best response angle matches the sign change of the trade value") {
    // grid/bisection search for the zero of the type-1 value along the arc
    const auto d = eq10();
    const StrategyProfile naive = StrategyProfile::naive();
    const auto model = make_trade_model(d, naive, 11, TradeMode::Myopic);
    double lo = 1e-6, hi = kPi / 2 - 1e-6;
    REQUIRE(model.value(1, {std::cos(lo), std::sin(lo)}) > 0.0);
    REQUIRE(model.value(1, {std::cos(hi), std::sin(hi)}) < 0.0);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (model.value(1, {std::cos(mid), std::sin(mid)}) > 0.0 ? lo : hi) = mid;
    }
    const BestResponseResult br = best_response(d, naive, 11, TradeMode::Myopic);
    CHECK(0.5 * (lo + hi) == doctest::Approx(br.theta[0]).epsilon(1e-9));
}

TEST_CASE("best response errors when a half-square probability is zero") {
    const auto d = JointUtilityDistribution::quadrant_constant({0.0, 0.5, 0.5, 0.0});
    CHECK_THROWS_AS(best_response(d, StrategyProfile::naive(), 11, TradeMode::Myopic),
                    domain_error);
}

TEST_CASE("best response flags 0/0 components at the zero profile") {
    const auto uni = JointUtilityDistribution::uniform();
    const BestResponseResult br =
        best_response(uni, StrategyProfile::zero(), 11, TradeMode::Myopic);
    for (int i = 0; i < 8; ++i) {
        CHECK_FALSE(br.defined[i]);
        CHECK(br.theta[i] == 0.0);  // held at the input value
    }
}

TEST_CASE("zero denominator with positive numerator gives pi/2") {
    const auto uni = JointUtilityDistribution::uniform();
    StrategyProfile p = StrategyProfile::naive();
    p[6] = p[7] = 0.0;  // I7 = I8 = 0 forces theta_1 to pi/2
    const BestResponseResult br = best_response(uni, p, 11, TradeMode::Myopic);
    CHECK(br.defined[0]);
    CHECK(br.theta[0] == doctest::Approx(kHalfPi));
}

TEST_CASE("residual values") {
    const auto uni = JointUtilityDistribution::uniform();
    CHECK(residual(uni, StrategyProfile::naive(), 11, TradeMode::Myopic) < 1e-6);
    StrategyProfile third;
    third.theta.fill(kPi / 3);
    CHECK(residual(uni, third, 11, TradeMode::Myopic) > 0.1);
    // point-symmetric kde at naive
    const auto sym = JointUtilityDistribution::kde({{0.4, -0.3}, {-0.4, 0.3}}, 0.3, 0.3);
    CHECK(residual(sym, StrategyProfile::naive(), 11, TradeMode::Myopic) < 1e-6);
}

TEST_CASE("solver returns the naive equilibrium for uniform and tent") {
    for (const auto& d : {JointUtilityDistribution::uniform(),
                          JointUtilityDistribution::product_tent()}) {
        const EquilibriumSolution sol = solve_equilibrium(d, SolverOptions{}, TradeMode::Myopic);
        CHECK(sol.converged);
        CHECK(sol.residual <= 1e-6);
        for (int i = 0; i < 8; ++i)
            CHECK(sol.theta_star[i] == doctest::Approx(kPi / 4).epsilon(1e-7));
    }
}

TEST_CASE("solver finds the eq10 equilibrium") {
    SolverOptions opts;
    opts.tolerance = 1e-9;
    const EquilibriumSolution sol = solve_equilibrium(eq10(), opts, TradeMode::Myopic);
    CHECK(sol.converged);
    for (int i = 0; i < 8; ++i) {
        CAPTURE(i);
        CHECK(sol.theta_star[i] == doctest::Approx(std::atan(kEq10Tans[i])).epsilon(1e-6));
    }
    // the worked offer examples: (0.8, 0.4) goes both ways, (-0.9, 0.4) neither
    CHECK(offers_trade(sol.theta_star, 1, {0.8, 0.4}));
    CHECK(offers_trade(sol.theta_star, 5, {0.8, 0.4}));
    CHECK_FALSE(offers_trade(sol.theta_star, 2, {-0.9, 0.4}));
    CHECK_FALSE(offers_trade(sol.theta_star, 6, {-0.9, 0.4}));
    // a lopsided pair trades only away from its weak issue
    CHECK(offers_trade(sol.theta_star, 1, {0.8, 0.1}));
    CHECK_FALSE(offers_trade(sol.theta_star, 5, {0.8, 0.1}));
}

TEST_CASE("solver finds the power-4 equilibrium") {
    SolverOptions opts;
    opts.tolerance = 1e-9;
    const auto d = JointUtilityDistribution::product_power(4);
    const EquilibriumSolution sol = solve_equilibrium(d, opts, TradeMode::Myopic);
    CHECK(sol.converged);
    for (int i = 0; i < 8; ++i) {
        CAPTURE(i);
        CHECK(sol.theta_star[i] == doctest::Approx(std::atan(kPower4Tans[i])).epsilon(1e-5));
    }
}

TEST_CASE("solutions satisfy the existence-region lower bounds") {
    const JointUtilityDistribution dists[] = {eq10(), JointUtilityDistribution::product_power(4)};
    for (const auto& d : dists) {
        const EquilibriumSolution sol = solve_equilibrium(d, SolverOptions{}, TradeMode::Myopic);
        const double tmin = theta_min_bound(half_plane_stats(d, 0.0), 11);
        CHECK(sol.theta_star[0] + sol.theta_star[2] >= tmin - 1e-9);
        CHECK(sol.theta_star[1] + sol.theta_star[3] >= tmin - 1e-9);
        CHECK(sol.theta_star[4] + sol.theta_star[6] >= tmin - 1e-9);
        CHECK(sol.theta_star[5] + sol.theta_star[7] >= tmin - 1e-9);
        // at least two of each player's four angles at or above theta_min
        int p1 = 0, p2 = 0;
        for (int i = 0; i < 4; ++i) {
            if (sol.theta_star[i] >= tmin - 1e-9) ++p1;
            if (sol.theta_star[i + 4] >= tmin - 1e-9) ++p2;
        }
        CHECK(p1 >= 2);
        CHECK(p2 >= 2);
    }
}

TEST_CASE("projection scales deficient pairs up to the bound") {
    StrategyProfile p = StrategyProfile::zero();
    p[0] = 0.02;
    p[2] = 0.02;
    const StrategyProfile q = project_to_existence_region(p, 0.2);
    CHECK(q[0] + q[2] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(q[0] == doctest::Approx(q[2]));
    CHECK(q[1] + q[3] == doctest::Approx(0.2).epsilon(1e-12));  // zero pair lifted evenly
}

TEST_CASE("transposed density maps the equilibrium by the relabeling pattern") {
    SolverOptions opts;
    opts.tolerance = 1e-9;
    const auto a = solve_equilibrium(eq10(), opts, TradeMode::Myopic);
    // swap the issues: quadrants 2 and 4 exchange their weights
    const auto transposed = JointUtilityDistribution::quadrant_constant({0.1, 0.2, 0.3, 0.4});
    const auto b = solve_equilibrium(transposed, opts, TradeMode::Myopic);
    const int perm[8] = {4, 7, 6, 5, 0, 3, 2, 1};  // (theta_5, theta_8, theta_7, theta_6, ...)
    for (int i = 0; i < 8; ++i) {
        CAPTURE(i);
        CHECK(b.theta_star[i] == doctest::Approx(a.theta_star[perm[i]]).epsilon(1e-5));
    }
}

TEST_CASE("multi-start finds exactly one equilibrium for uniform") {
    SolverOptions opts;
    opts.starts = 6;
    opts.seed = 11;
    const MultiStartResult multi = find_equilibria(JointUtilityDistribution::uniform(), opts,
                                                   TradeMode::Myopic);
    CHECK(multi.starts_attempted == 6);
    CHECK(multi.starts_converged == 6);
    REQUIRE(multi.solutions.size() == 1);
    CHECK(multi.solutions[0].theta_star[3] == doctest::Approx(kPi / 4).epsilon(1e-6));
}

TEST_CASE("solver reports non-convergence with history") {
    SolverOptions opts;
    opts.max_iterations = 2;
    opts.tolerance = 1e-12;
    try {
        solve_equilibrium(eq10(), opts, TradeMode::Myopic);
        FAIL("expected nonconvergence_error");
    } catch (const nonconvergence_error& e) {
        CHECK(e.residual_history.size() == 2);
        CHECK(e.last_iterate.size() == 8);
    }
}

TEST_CASE("solver validates its options") {
    const auto uni = JointUtilityDistribution::uniform();
    SolverOptions opts;
    opts.n = 4;
    CHECK_THROWS_AS(solve_equilibrium(uni, opts, TradeMode::Myopic), domain_error);
    opts.n = 11;
    opts.damping = 0.0;
    CHECK_THROWS_AS(solve_equilibrium(uni, opts, TradeMode::Myopic), domain_error);
}

TEST_CASE("myopic and groupwide equilibria coincide for point-symmetric densities") {
    SolverOptions opts;
    opts.tolerance = 1e-8;
    for (const auto& d : {JointUtilityDistribution::product_tent(),
                          JointUtilityDistribution::product_vee()}) {
        const auto my = solve_equilibrium(d, opts, TradeMode::Myopic);
        const auto gw = solve_equilibrium(d, opts, TradeMode::Groupwide);
        CHECK(my.theta_star.sup_distance(gw.theta_star) <= 1e-5);
    }
}

TEST_CASE("strict inequality of values inside and outside converged wedges") {
    SolverOptions opts;
    opts.tolerance = 1e-9;
    const auto d = eq10();
    const EquilibriumSolution sol = solve_equilibrium(d, opts, TradeMode::Myopic);
    const auto model = make_trade_model(d, sol.theta_star, 11, TradeMode::Myopic);
    RngStream rng(23, 0);
    const double margin = 1e-3;
    for (int type = 1; type <= 8; ++type) {
        const double t = model.boundary_tan(type);
        const int quadrant = (type - 1) % 4 + 1;
        const double sx = (quadrant == 1 || quadrant == 4) ? 1.0 : -1.0;
        const double sy = (quadrant == 1 || quadrant == 2) ? 1.0 : -1.0;
        int in_done = 0, out_done = 0;
        while (in_done < 100 || out_done < 100) {
            const double gain = rng.next_double();
            const double give = rng.next_double();
            // distance from the zero-value line give = gain * t
            const double dist = std::abs(give - gain * t) / std::sqrt(1 + t * t);
            if (dist <= margin) continue;
            const UtilityPair u = type <= 4 ? UtilityPair{sx * gain, sy * give}
                                            : UtilityPair{sx * give, sy * gain};
            const double v = model.value(type, u);
            if (give < gain * t && in_done < 100) {
                CHECK(v > 0.0);
                ++in_done;
            } else if (give > gain * t && out_done < 100) {
                CHECK(v < 0.0);
                ++out_done;
            }
        }
    }
}
