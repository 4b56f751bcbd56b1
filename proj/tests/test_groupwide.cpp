#include <doctest.h>

#include <cmath>

#include "vt/distribution.hpp"
#include "vt/equilibrium.hpp"
#include "vt/groupwide.hpp"
#include "vt/rng.hpp"

using namespace vt;

namespace {

constexpr double kPi = 3.14159265358979323846;

JointUtilityDistribution eq10() {
    return JointUtilityDistribution::quadrant_constant({0.1, 0.4, 0.3, 0.2});
}

}  // namespace

TEST_CASE("overlap integrals vanish at the naive profile") {
    const auto j = j_integrals(JointUtilityDistribution::uniform(), StrategyProfile::naive());
    for (double v : j) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("full-quadrant wedges overlap in whole quadrants") {
    StrategyProfile full;
    full.theta.fill(kPi / 2);
    const auto j = j_integrals(JointUtilityDistribution::uniform(), full);
    for (double v : j) CHECK(v == doctest::Approx(0.25).epsilon(1e-9));
    // with eq10 weights the overlaps are the quadrant masses
    const auto j10 = j_integrals(eq10(), full);
    CHECK(j10[0] == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(j10[1] == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(j10[2] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(j10[3] == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("eq10 equilibrium has a both-direction region in quadrant 1") {
    SolverOptions opts;
    opts.tolerance = 1e-9;
    const auto d = eq10();
    const EquilibriumSolution sol = solve_equilibrium(d, opts, TradeMode::Myopic);
    const auto j = j_integrals(d, sol.theta_star);
    CHECK(j[0] > 1e-3);   // the green region of quadrant 1
    CHECK(j[3] > 1e-3);   // and quadrant 4
    CHECK(j[1] == doctest::Approx(0.0));
    CHECK(j[2] == doctest::Approx(0.0));
}

TEST_CASE("effective q reduces to q at n = 3") {
    const auto d = eq10();
    const StrategyProfile th = StrategyProfile::naive();
    const auto im = region_masses(d, th, 0.0);
    const auto half = half_plane_stats(d, 0.0);
    const EffectiveQSet eq = effective_q_from(im, half, 3);
    CHECK(eq.q1_plus == half.q1_plus);
    CHECK(eq.q1_minus == half.q1_minus);
    CHECK(eq.q2_plus == half.q2_plus);
    CHECK(eq.q2_minus == half.q2_minus);
}

TEST_CASE("point-symmetric density at naive keeps q at one half") {
    const auto d = JointUtilityDistribution::product_tent();
    const EffectiveQSet eq = effective_q(d, StrategyProfile::naive(), 11);
    CHECK(eq.q1_plus == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(eq.q1_minus == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(eq.q2_plus == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(eq.q2_minus == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("effective q follows the correction arithmetic at the naive profile") {
    const auto d = eq10();
    const auto im = region_masses(d, StrategyProfile::naive(), 0.0);
    const auto half = half_plane_stats(d, 0.0);
    const EffectiveQSet eq = effective_q_from(im, half, 11);
    const double factor = 8.0 / 9.0;
    const double d1 = (im[5] + im[6]) * (im[0] + im[3]) - (im[4] + im[7]) * (im[1] + im[2]);
    CHECK(eq.q1_plus == doctest::Approx(0.3 + factor * d1).epsilon(1e-10));
    // for eq10 at naive the correction cancels exactly
    CHECK(std::abs(d1) < 1e-9);
}

TEST_CASE("complementarity holds exactly by construction") {
    const auto d = eq10();
    SolverOptions opts;
    opts.tolerance = 1e-9;
    const EquilibriumSolution sol = solve_equilibrium(d, opts, TradeMode::Myopic);
    const auto im = region_masses(d, sol.theta_star, 0.0);
    const auto half = half_plane_stats(d, 0.0);
    const EffectiveQSet eq = effective_q_from(im, half, 11);
    // the corrections cancel exactly; the sums equal the plain Q sums
    CHECK(eq.q1_plus + eq.q1_minus == half.q1_plus + half.q1_minus);
    CHECK(eq.q2_plus + eq.q2_minus == half.q2_plus + half.q2_minus);
    CHECK(eq.q1_plus + eq.q1_minus == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(eq.q2_plus + eq.q2_minus == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("j-free form equals the pre-cancellation form with explicit overlaps") {
    const auto d = eq10();
    StrategyProfile wide;
    wide.theta.fill(1.2);  // every quadrant gets a genuine overlap
    const auto im = region_masses(d, wide, 0.0);
    const auto half = half_plane_stats(d, 0.0);
    const auto j = j_integrals(d, wide);
    const int n = 11;
    const double k = static_cast<double>(n - 3) / (n - 2);
    // the derivation's form before the overlap terms cancel
    const double gives_away = (im[4] + im[7]) * (im[1] + im[2]) -
                              0.5 * (j[0] + j[3]) * (j[1] + j[2]);
    const double receives = (im[5] + im[6]) * (im[0] + im[3]) -
                            0.5 * (j[1] + j[2]) * (j[0] + j[3]);
    const double pre = half.q1_plus + k * (receives - gives_away);
    const EffectiveQSet eq = effective_q_from(im, half, n);
    CHECK(eq.q1_plus == doctest::Approx(pre).epsilon(1e-12));
    CHECK(j[0] + j[3] > 1e-2);  // the overlaps are genuinely nonzero here
    CHECK(j[1] + j[2] > 1e-2);
}

TEST_CASE("effective q rejects even committee sizes") {
    const auto d = JointUtilityDistribution::uniform();
    CHECK_THROWS(effective_q(d, StrategyProfile::naive(), 8));
}
