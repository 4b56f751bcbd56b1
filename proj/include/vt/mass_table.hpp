#pragma once

#include <array>

#include "vt/distribution.hpp"
#include "vt/equilibrium_types.hpp"

namespace vt {

// Half-square masses and first moments; independent of the strategy profile.
struct HalfPlaneStats {
    double q1_plus = 0.0;   // P(x > 0)
    double q1_minus = 0.0;  // P(x < 0)
    double q2_plus = 0.0;   // P(y > 0)
    double q2_minus = 0.0;  // P(y < 0)
    double moment_x_pos = 0.0;  // integral of x f over x > 0
    double moment_x_neg = 0.0;  // integral of x f over x < 0
    double moment_y_pos = 0.0;
    double moment_y_neg = 0.0;
};

HalfPlaneStats half_plane_stats(const JointUtilityDistribution& dist, double tol);

// Every integral the Theorem-1 / Appendix C / Appendix D machinery consumes.
struct RegionMassTable {
    std::array<double, 8> region_mass{};    // I_1..I_8
    double player1_sum = 0.0;               // I_S1 = I_1+I_2+I_3+I_4
    double player2_sum = 0.0;               // I_S2 = I_5+I_6+I_7+I_8
    HalfPlaneStats half;
    std::array<double, 4> overlap_mass{};   // J_q = mass of R_q intersect R_{q+4}
    std::array<double, 8> moment_x{};       // integral of x f over R_i
    std::array<double, 8> moment_y{};       // integral of y f over R_i
};

// Lean path used inside the fixed-point iteration: the eight wedge masses.
std::array<double, 8> region_masses(const JointUtilityDistribution& dist,
                                    const StrategyProfile& theta, double tol);

RegionMassTable mass_table(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                           double tol);

// Same, reusing precomputed half-plane stats (they do not depend on theta).
RegionMassTable mass_table(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                           double tol, const HalfPlaneStats& half);

}  // namespace vt
