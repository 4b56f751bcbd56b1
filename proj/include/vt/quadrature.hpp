#pragma once

#include <functional>

#include "vt/distribution.hpp"
#include "vt/geometry.hpp"

namespace vt {

// Integral of density * weight over a convex region. Regions are split
// along the distribution's declared kink lines, triangulated, and each
// triangle integrated with a fixed Gauss-Legendre product rule under the
// Duffy map, with greedy adaptive quadrisection until the summed error
// estimate meets tol. Throws quadrature_error (carrying the best estimate
// and bound) if the refinement budget runs out first.
double region_integral(const JointUtilityDistribution& dist, const Region& region,
                       const std::function<double(double, double)>& weight, double tol);

// integral of the density itself; exact 0 for degenerate regions
double region_mass(const JointUtilityDistribution& dist, const Region& region, double tol);

// integral of (axis coordinate) * density; axis is 'x' or 'y'
double region_moment(const JointUtilityDistribution& dist, const Region& region, char axis,
                     double tol);

}  // namespace vt
