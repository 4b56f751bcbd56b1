#pragma once

#include <array>
#include <vector>

#include "vt/distribution.hpp"
#include "vt/equilibrium_types.hpp"
#include "vt/groupwide.hpp"
#include "vt/mass_table.hpp"

namespace vt {

// C(n-2, (n-3)/2) * q_minus^((n-1)/2) * q_plus^((n-3)/2): the probability
// that the gained vote swings the issue, given the split of the n-2
// non-trading voters. n must be odd and >= 3; q_minus + q_plus = 1.
double pivot_probability(double q_minus, double q_plus, int n);

// C(n-2, (n-3)/2), the count of pivotal splits of the non-trading voters.
double swing_binomial(int n);

// The four half-square probabilities feeding the pivot factors; plain Q in
// myopic mode, effective values in groupwide mode.
struct QuadProbabilities {
    double q1_plus = 0.0, q1_minus = 0.0, q2_plus = 0.0, q2_minus = 0.0;
};

QuadProbabilities quad_probabilities(const std::array<double, 8>& region_mass,
                                     const HalfPlaneStats& half, int n, TradeMode mode);

// Pivot probability factors (sans binomial) for the four flip events.
struct PivotFactors {
    double toward_plus_t1 = 0.0;   // a - vote on t1 flips to +
    double toward_minus_t1 = 0.0;  // a + vote on t1 flips to -
    double toward_plus_t2 = 0.0;
    double toward_minus_t2 = 0.0;
};

PivotFactors pivot_factors(const QuadProbabilities& q, int n);

// Gain/loss coefficients of the linear expected-value form for each trade
// type (also the a_i / c_i of the group-welfare boundaries).
struct TradeCoefficients {
    std::array<double, 8> gain{};
    std::array<double, 8> loss{};
};

TradeCoefficients trade_coefficients(const std::array<double, 8>& region_mass,
                                     const QuadProbabilities& q, int n);

// Linear model of the trader's expected value for each trade type at a
// fixed partner profile: E = prefactor * (gain_i |u_gain| - loss_i |u_give|).
// Shared by the best-response map and the welfare boundaries.
struct TradeValueModel {
    int n = 11;
    TradeMode mode = TradeMode::Myopic;
    std::array<double, 8> gain{};
    std::array<double, 8> loss{};
    double player1_sum = 0.0;  // conditioning mass for types 5..8
    double player2_sum = 0.0;  // conditioning mass for types 1..4
    double binom = 0.0;        // C(n-2, (n-3)/2)
    std::array<bool, 8> defined{};

    // expected trader value of offering trade `type` at utility pair u;
    // throws domain_error if u is outside the type's quadrant and
    // no_partner_error when the partner-side mass is zero
    double value(int trade_type, UtilityPair u) const;

    // tan of the zero-value boundary angle; +inf when loss_i = 0, NaN when 0/0
    double boundary_tan(int trade_type) const;
};

TradeValueModel make_trade_model(const JointUtilityDistribution& dist,
                                 const StrategyProfile& theta, int n, TradeMode mode,
                                 double tol = 0.0);

double trade_expected_value(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                            int n, int trade_type, UtilityPair u, TradeMode mode,
                            double tol = 0.0);

struct BestResponseResult {
    StrategyProfile theta;
    std::array<bool, 8> defined{};  // false where the map is 0/0
};

// One application of the Theorem-1 map. Zero denominators with positive
// numerators give pi/2; 0/0 components are flagged undefined (angle copied
// from the input). Throws domain_error if any pivot probability is zero.
BestResponseResult best_response(const JointUtilityDistribution& dist,
                                 const StrategyProfile& theta, int n, TradeMode mode,
                                 double tol = 0.0);

// Integral-free variant working from precomputed masses.
BestResponseResult best_response_from_masses(const std::array<double, 8>& region_mass,
                                             const HalfPlaneStats& half, int n, TradeMode mode,
                                             const StrategyProfile& prev);

// sup-norm of theta - BR(theta) over the defined components
double residual(const JointUtilityDistribution& dist, const StrategyProfile& theta, int n,
                TradeMode mode, double tol = 0.0);

// whether u lies in the closed wedge R_{trade_type} at the given profile
bool offers_trade(const StrategyProfile& theta, int trade_type, UtilityPair u);

// arctan(Q_min): the lower bound under which non-trivial solutions cannot
// fall (pair sums theta_1+theta_3 etc. stay at or above it).
double theta_min_bound(const HalfPlaneStats& half, int n);

// Projects pair sums (1,3), (2,4), (5,7), (6,8) up onto the constraint set.
StrategyProfile project_to_existence_region(StrategyProfile theta, double theta_min);

// Damped projected fixed-point iteration from the naive profile. Throws
// nonconvergence_error with the residual history when max_iterations is hit.
EquilibriumSolution solve_equilibrium(const JointUtilityDistribution& dist,
                                      const SolverOptions& opts, TradeMode mode);

// As above but from an arbitrary start (used by the multi-start driver).
EquilibriumSolution solve_equilibrium_from(const JointUtilityDistribution& dist,
                                           const SolverOptions& opts, TradeMode mode,
                                           const StrategyProfile& start);

struct MultiStartResult {
    std::vector<EquilibriumSolution> solutions;  // distinct converged fixed points
    int starts_attempted = 0;
    int starts_converged = 0;
};

// Naive start plus (starts-1) random points in the existence region;
// deduplicates within 1e-4 sup-norm. Per-start failures are recorded, not
// fatal.
MultiStartResult find_equilibria(const JointUtilityDistribution& dist, const SolverOptions& opts,
                                 TradeMode mode);

}  // namespace vt
