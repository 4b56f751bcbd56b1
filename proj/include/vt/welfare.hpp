#pragma once

#include <array>

#include "vt/distribution.hpp"
#include "vt/equilibrium.hpp"
#include "vt/geometry.hpp"

namespace vt {

// Boundary of the group-beneficial half-plane for one trade type. Stored in
// product form (a, a*b, c, c*d) so zero conditioning masses stay computable;
// b and d themselves are undefined (NaN) when their mass vanishes.
struct WelfareBoundary {
    double a = 0.0;
    double c = 0.0;
    double ab = 0.0;  // a * b
    double cd = 0.0;  // c * d
    bool a_defined = true;  // conditioning mass behind b nonzero
    bool c_defined = true;

    double b() const;
    double d() const;
    // a/c: equals tan(theta_i) at an equilibrium profile
    double slope() const;
};

struct WelfareBoundarySet {
    std::array<WelfareBoundary, 8> boundary{};
    int n = 11;
    TradeMode mode = TradeMode::Myopic;
    double player1_sum = 0.0;
    double player2_sum = 0.0;
    double binom = 0.0;

    // expected change in summed group utility from offering trade `type` at
    // u (sign pattern per quadrant); throws domain_error outside the
    // quadrant, no_partner_error when the partner side has zero mass
    double group_value(int trade_type, UtilityPair u) const;

    // the half-plane {group_value >= 0} as coefficients alpha x + beta y +
    // gamma >= 0 in raw coordinates
    void beneficial_line(int trade_type, double& alpha, double& beta, double& gamma) const;
};

// All 32 Appendix-C coefficients from region masses and first moments. In
// groupwide mode the pivot powers inside a_i and c_i use the effective
// probabilities while the b_i / d_i terms keep plain Q.
WelfareBoundarySet welfare_coefficients(const JointUtilityDistribution& dist,
                                        const StrategyProfile& theta, int n, TradeMode mode,
                                        double tol = 0.0);

WelfareBoundarySet welfare_coefficients_from(const RegionMassTable& table, int n,
                                             TradeMode mode);

double group_expected_value(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                            int n, int trade_type, UtilityPair u, TradeMode mode,
                            double tol = 0.0);

struct WelfareReport {
    // beneficial mass / offered mass, both under the overlap weighting that
    // gives each both-direction point half weight per direction
    double beneficial_probability = 0.0;
    // the numerator alone (unconditional on a trade being offered)
    double beneficial_mass = 0.0;
    double offered_mass = 0.0;
    std::array<double, 8> per_type_beneficial{};
    std::array<double, 8> per_type_offered{};
    // integral of the expected group value over offered pairs / offered mass
    double expected_group_value_per_offer = 0.0;
    // sup-norm residual of the profile under the best-response map; above
    // ~1e-4 the profile is not an equilibrium and the caller is warned
    double profile_residual = 0.0;
    int n = 11;
    TradeMode mode = TradeMode::Myopic;
    bool defined = true;  // false when the offered mass vanishes
};

WelfareReport beneficial_trade_probability(const JointUtilityDistribution& dist,
                                           const StrategyProfile& theta, int n, TradeMode mode,
                                           double tol = 0.0);

}  // namespace vt
