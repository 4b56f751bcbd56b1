#include "vt/groupwide.hpp"

#include "vt/errors.hpp"
#include "vt/geometry.hpp"
#include "vt/quadrature.hpp"

namespace vt {

std::array<double, 4> j_integrals(const JointUtilityDistribution& dist,
                                  const StrategyProfile& theta, double tol) {
    const double t = tol > 0.0 ? tol : dist.default_tol();
    std::array<double, 4> j{};
    for (int q = 0; q < 4; ++q) {
        const Region overlap =
            intersect(wedge_region(q + 1, theta[q]), wedge_region(q + 5, theta[q + 4]));
        j[q] = region_mass(dist, overlap, t);
    }
    return j;
}

EffectiveQSet effective_q_from(const std::array<double, 8>& im, const HalfPlaneStats& half,
                               int n) {
    if (n < 3 || n % 2 == 0) throw domain_error("committee size n must be odd and >= 3");
    const double factor = static_cast<double>(n - 3) / static_cast<double>(n - 2);
    const double d1 =
        (im[5] + im[6]) * (im[0] + im[3]) - (im[4] + im[7]) * (im[1] + im[2]);
    const double d2 =
        (im[2] + im[3]) * (im[4] + im[5]) - (im[0] + im[1]) * (im[6] + im[7]);
    EffectiveQSet q;
    q.q1_plus = half.q1_plus + factor * d1;
    q.q1_minus = half.q1_minus - factor * d1;
    q.q2_plus = half.q2_plus + factor * d2;
    q.q2_minus = half.q2_minus - factor * d2;
    return q;
}

EffectiveQSet effective_q(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                          int n, double tol) {
    return effective_q_from(region_masses(dist, theta, tol), half_plane_stats(dist, tol), n);
}

}  // namespace vt
