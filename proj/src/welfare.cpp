#include "vt/welfare.hpp"

#include <cmath>
#include <limits>

#include "vt/errors.hpp"
#include "vt/quadrature.hpp"

namespace vt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// sign pattern of the group-value linear form:
//   E_i = sa * (a u_gain + ab) + sc * (c u_give + cd),
// u_gain = x, u_give = y for types 1..4 and swapped for 5..8
constexpr int kSignA[8] = {+1, -1, -1, +1, +1, +1, -1, -1};
constexpr int kSignC[8] = {-1, -1, +1, +1, -1, +1, +1, -1};

}  // namespace

double WelfareBoundary::b() const { return a_defined && a != 0.0 ? ab / a : kNaN; }
double WelfareBoundary::d() const { return c_defined && c != 0.0 ? cd / c : kNaN; }
double WelfareBoundary::slope() const {
    if (c > 0.0) return a / c;
    return a > 0.0 ? std::numeric_limits<double>::infinity() : kNaN;
}

double WelfareBoundarySet::group_value(int trade_type, UtilityPair u) const {
    if (trade_type < 1 || trade_type > 8) throw domain_error("trade_type must be in 1..8");
    const int quadrant = (trade_type - 1) % 4 + 1;
    const double sx = (quadrant == 1 || quadrant == 4) ? 1.0 : -1.0;
    const double sy = (quadrant == 1 || quadrant == 2) ? 1.0 : -1.0;
    if (sx * u.on_t1 < 0.0 || sy * u.on_t2 < 0.0)
        throw domain_error("utility pair is outside the trade type's quadrant");
    const double partner_mass = trade_type <= 4 ? player2_sum : player1_sum;
    if (partner_mass <= 0.0)
        throw no_partner_error("no partner offers the complementary trade (zero mass)");
    const int i = trade_type - 1;
    const double u_gain = trade_type <= 4 ? u.on_t1 : u.on_t2;
    const double u_give = trade_type <= 4 ? u.on_t2 : u.on_t1;
    const WelfareBoundary& w = boundary[i];
    return 2.0 * binom / partner_mass *
           (kSignA[i] * (w.a * u_gain + w.ab) + kSignC[i] * (w.c * u_give + w.cd));
}

void WelfareBoundarySet::beneficial_line(int trade_type, double& alpha, double& beta,
                                         double& gamma) const {
    const int i = trade_type - 1;
    const WelfareBoundary& w = boundary[i];
    // gain coordinate is x for types 1..4, y for types 5..8
    const double coef_gain = kSignA[i] * w.a;
    const double coef_give = kSignC[i] * w.c;
    if (trade_type <= 4) {
        alpha = coef_gain;
        beta = coef_give;
    } else {
        alpha = coef_give;
        beta = coef_gain;
    }
    gamma = kSignA[i] * w.ab + kSignC[i] * w.cd;
}

WelfareBoundarySet welfare_coefficients_from(const RegionMassTable& table, int n,
                                             TradeMode mode) {
    const QuadProbabilities q = quad_probabilities(table.region_mass, table.half, n, mode);
    const PivotFactors p = pivot_factors(q, n);
    const HalfPlaneStats& h = table.half;
    const double k_hi = (n - 1) / 2;
    const double k_lo = (n - 3) / 2;

    // the (n+-1)/2 / Q * half-moment sums always use plain Q, never the
    // effective probabilities
    const double sum_t1_hi_neg =
        k_hi / h.q1_minus * h.moment_x_neg + k_lo / h.q1_plus * h.moment_x_pos;
    const double sum_t1_lo_neg =
        k_lo / h.q1_minus * h.moment_x_neg + k_hi / h.q1_plus * h.moment_x_pos;
    const double sum_t2_hi_neg =
        k_hi / h.q2_minus * h.moment_y_neg + k_lo / h.q2_plus * h.moment_y_pos;
    const double sum_t2_lo_neg =
        k_lo / h.q2_minus * h.moment_y_neg + k_hi / h.q2_plus * h.moment_y_pos;

    const auto& im = table.region_mass;
    const auto& mx = table.moment_x;
    const auto& my = table.moment_y;

    struct Side {
        double mass, moment, pow, voters;
    };
    // a-side (gained issue) per type
    const Side aside[8] = {
        {im[5] + im[6], mx[5] + mx[6], p.toward_plus_t1, sum_t1_hi_neg},   // 1
        {im[4] + im[7], mx[4] + mx[7], p.toward_minus_t1, sum_t1_lo_neg},  // 2
        {im[4] + im[7], mx[4] + mx[7], p.toward_minus_t1, sum_t1_lo_neg},  // 3
        {im[5] + im[6], mx[5] + mx[6], p.toward_plus_t1, sum_t1_hi_neg},   // 4
        {im[2] + im[3], my[2] + my[3], p.toward_plus_t2, sum_t2_hi_neg},   // 5
        {im[2] + im[3], my[2] + my[3], p.toward_plus_t2, sum_t2_hi_neg},   // 6
        {im[0] + im[1], my[0] + my[1], p.toward_minus_t2, sum_t2_lo_neg},  // 7
        {im[0] + im[1], my[0] + my[1], p.toward_minus_t2, sum_t2_lo_neg},  // 8
    };
    // c-side (given issue) per type
    const Side cside[8] = {
        {im[6] + im[7], my[6] + my[7], p.toward_minus_t2, sum_t2_lo_neg},  // 1
        {im[6] + im[7], my[6] + my[7], p.toward_minus_t2, sum_t2_lo_neg},  // 2
        {im[4] + im[5], my[4] + my[5], p.toward_plus_t2, sum_t2_hi_neg},   // 3
        {im[4] + im[5], my[4] + my[5], p.toward_plus_t2, sum_t2_hi_neg},   // 4
        {im[1] + im[2], mx[1] + mx[2], p.toward_minus_t1, sum_t1_lo_neg},  // 5
        {im[0] + im[3], mx[0] + mx[3], p.toward_plus_t1, sum_t1_hi_neg},   // 6
        {im[0] + im[3], mx[0] + mx[3], p.toward_plus_t1, sum_t1_hi_neg},   // 7
        {im[1] + im[2], mx[1] + mx[2], p.toward_minus_t1, sum_t1_lo_neg},  // 8
    };

    WelfareBoundarySet set;
    set.n = n;
    set.mode = mode;
    set.player1_sum = table.player1_sum;
    set.player2_sum = table.player2_sum;
    set.binom = swing_binomial(n);
    for (int i = 0; i < 8; ++i) {
        WelfareBoundary& w = set.boundary[i];
        w.a = aside[i].mass * aside[i].pow;
        w.ab = aside[i].pow * (aside[i].moment + aside[i].mass * aside[i].voters);
        w.a_defined = aside[i].mass > 0.0;
        w.c = cside[i].mass * cside[i].pow;
        w.cd = cside[i].pow * (cside[i].moment + cside[i].mass * cside[i].voters);
        w.c_defined = cside[i].mass > 0.0;
    }
    return set;
}

WelfareBoundarySet welfare_coefficients(const JointUtilityDistribution& dist,
                                        const StrategyProfile& theta, int n, TradeMode mode,
                                        double tol) {
    return welfare_coefficients_from(mass_table(dist, theta, tol), n, mode);
}

double group_expected_value(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                            int n, int trade_type, UtilityPair u, TradeMode mode, double tol) {
    return welfare_coefficients(dist, theta, n, mode, tol).group_value(trade_type, u);
}

WelfareReport beneficial_trade_probability(const JointUtilityDistribution& dist,
                                           const StrategyProfile& theta, int n, TradeMode mode,
                                           double tol) {
    const double t = tol > 0.0 ? tol : dist.default_tol();
    const RegionMassTable table = mass_table(dist, theta, t);
    const WelfareBoundarySet set = welfare_coefficients_from(table, n, mode);

    WelfareReport rep;
    rep.n = n;
    rep.mode = mode;
    {
        const BestResponseResult br =
            best_response_from_masses(table.region_mass, table.half, n, mode, theta);
        for (int i = 0; i < 8; ++i)
            if (br.defined[i])
                rep.profile_residual =
                    std::max(rep.profile_residual, std::abs(br.theta[i] - theta[i]));
    }

    std::array<Region, 8> wedges;
    for (int i = 0; i < 8; ++i) wedges[i] = wedge_region(i + 1, theta[i]);
    std::array<Region, 4> green;
    for (int qd = 0; qd < 4; ++qd) green[qd] = intersect(wedges[qd], wedges[qd + 4]);

    double numer = 0.0;
    double group_value_integral = 0.0;
    for (int i = 0; i < 8; ++i) {
        const int qd = i % 4;
        double alpha, beta, gamma;
        set.beneficial_line(i + 1, alpha, beta, gamma);
        // clip wedge to {alpha x + beta y + gamma >= 0}
        const HalfPlane keep{-alpha, -beta, gamma};
        const Region bene_full = clip(wedges[i], keep);
        const Region bene_green = clip(green[qd], keep);
        const double full = region_mass(dist, bene_full, t);
        const double overlapped = region_mass(dist, bene_green, t);
        rep.per_type_beneficial[i] = full - 0.5 * overlapped;
        rep.per_type_offered[i] = table.region_mass[i] - 0.5 * table.overlap_mass[qd];
        numer += rep.per_type_beneficial[i];

        // expected group value over the offered wedge (linear integrand):
        // prefactor [alpha Mx + beta My + gamma M] with half weight on green
        const double partner_sum = i < 4 ? table.player2_sum : table.player1_sum;
        if (partner_sum > 0.0) {
            const double pref = 2.0 * set.binom / partner_sum;
            const double gx = region_moment(dist, green[qd], 'x', t);
            const double gy = region_moment(dist, green[qd], 'y', t);
            const double gm = region_mass(dist, green[qd], t);
            group_value_integral +=
                pref * (alpha * (table.moment_x[i] - 0.5 * gx) +
                        beta * (table.moment_y[i] - 0.5 * gy) +
                        gamma * (table.region_mass[i] - 0.5 * gm));
        }
    }

    rep.beneficial_mass = numer;
    rep.offered_mass = table.player1_sum + table.player2_sum - table.overlap_mass[0] -
                       table.overlap_mass[1] - table.overlap_mass[2] - table.overlap_mass[3];
    if (rep.offered_mass <= 0.0) {
        rep.defined = false;
        rep.beneficial_probability = kNaN;
        rep.expected_group_value_per_offer = kNaN;
        return rep;
    }
    rep.beneficial_probability = numer / rep.offered_mass;
    rep.expected_group_value_per_offer = group_value_integral / rep.offered_mass;
    return rep;
}

}  // namespace vt
