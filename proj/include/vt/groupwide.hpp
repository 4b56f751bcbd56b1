#pragma once

#include <array>

#include "vt/distribution.hpp"
#include "vt/mass_table.hpp"

namespace vt {

// Half-square vote probabilities after accounting for the other pairs'
// trades (all-pairs approximation). Complementarity q+ + q- = 1 holds
// exactly; the correction terms are equal and opposite by construction.
struct EffectiveQSet {
    double q1_plus = 0.0;
    double q1_minus = 0.0;
    double q2_plus = 0.0;
    double q2_minus = 0.0;
};

// Overlap masses of the both-direction regions: R1^R5, R2^R6, R3^R7, R4^R8.
std::array<double, 4> j_integrals(const JointUtilityDistribution& dist,
                                  const StrategyProfile& theta, double tol = 0.0);

// J-free form: the overlap terms cancel, leaving only Q and I masses.
EffectiveQSet effective_q_from(const std::array<double, 8>& region_mass,
                               const HalfPlaneStats& half, int n);

EffectiveQSet effective_q(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                          int n, double tol = 0.0);

}  // namespace vt
