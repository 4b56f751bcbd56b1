#include "vt/mass_table.hpp"

#include "vt/errors.hpp"
#include "vt/geometry.hpp"
#include "vt/quadrature.hpp"

namespace vt {

namespace {

double resolve_tol(const JointUtilityDistribution& dist, double tol) {
    return tol > 0.0 ? tol : dist.default_tol();
}

void check_profile(const StrategyProfile& theta) {
    for (int i = 0; i < 8; ++i)
        if (!(theta[i] >= 0.0) || theta[i] > kHalfPi + kFullQuadrantSlack)
            throw domain_error("theta_" + std::to_string(i + 1) + " outside [0, pi/2]");
}

}  // namespace

HalfPlaneStats half_plane_stats(const JointUtilityDistribution& dist, double tol) {
    const double t = resolve_tol(dist, tol);
    HalfPlaneStats h;
    const Region xp = half_square('x', true);
    const Region xn = half_square('x', false);
    const Region yp = half_square('y', true);
    const Region yn = half_square('y', false);
    h.q1_plus = region_mass(dist, xp, t);
    h.q1_minus = region_mass(dist, xn, t);
    h.q2_plus = region_mass(dist, yp, t);
    h.q2_minus = region_mass(dist, yn, t);
    h.moment_x_pos = region_moment(dist, xp, 'x', t);
    h.moment_x_neg = region_moment(dist, xn, 'x', t);
    h.moment_y_pos = region_moment(dist, yp, 'y', t);
    h.moment_y_neg = region_moment(dist, yn, 'y', t);
    return h;
}

std::array<double, 8> region_masses(const JointUtilityDistribution& dist,
                                    const StrategyProfile& theta, double tol) {
    check_profile(theta);
    const double t = resolve_tol(dist, tol);
    std::array<double, 8> masses{};
    for (int i = 0; i < 8; ++i)
        masses[i] = region_mass(dist, wedge_region(i + 1, theta[i]), t);
    return masses;
}

RegionMassTable mass_table(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                           double tol) {
    return mass_table(dist, theta, tol, half_plane_stats(dist, tol));
}

RegionMassTable mass_table(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                           double tol, const HalfPlaneStats& half) {
    check_profile(theta);
    const double t = resolve_tol(dist, tol);
    RegionMassTable table;
    table.half = half;
    std::array<Region, 8> wedges;
    for (int i = 0; i < 8; ++i) {
        wedges[i] = wedge_region(i + 1, theta[i]);
        table.region_mass[i] = region_mass(dist, wedges[i], t);
        table.moment_x[i] = region_moment(dist, wedges[i], 'x', t);
        table.moment_y[i] = region_moment(dist, wedges[i], 'y', t);
    }
    table.player1_sum = table.region_mass[0] + table.region_mass[1] + table.region_mass[2] +
                        table.region_mass[3];
    table.player2_sum = table.region_mass[4] + table.region_mass[5] + table.region_mass[6] +
                        table.region_mass[7];
    for (int q = 0; q < 4; ++q)
        table.overlap_mass[q] = region_mass(dist, intersect(wedges[q], wedges[q + 4]), t);
    return table;
}

}  // namespace vt
