#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace vt {

constexpr double kHalfPi = 1.57079632679489661923;

// Angles near pi/2 within this slack behave as the full quadrant (tan
// would overflow otherwise).
constexpr double kFullQuadrantSlack = 1e-12;

enum class TradeMode { Myopic, Groupwide };

// The eight wedge angles theta_1..theta_8, radians in [0, pi/2].
struct StrategyProfile {
    std::array<double, 8> theta{};

    static StrategyProfile naive() {
        StrategyProfile p;
        p.theta.fill(kHalfPi / 2.0);
        return p;
    }
    static StrategyProfile zero() { return StrategyProfile{}; }

    double operator[](int i) const { return theta[i]; }
    double& operator[](int i) { return theta[i]; }

    double tan_of(int i) const {
        const double th = theta[i];
        return th >= kHalfPi - kFullQuadrantSlack ? std::numeric_limits<double>::infinity()
                                                  : std::tan(th);
    }

    double sup_distance(const StrategyProfile& other) const {
        double d = 0.0;
        for (int i = 0; i < 8; ++i) d = std::max(d, std::abs(theta[i] - other.theta[i]));
        return d;
    }
};

// A voter's signed preference intensities: x on issue t1, y on issue t2.
struct UtilityPair {
    double on_t1 = 0.0;
    double on_t2 = 0.0;

    // quadrant 1..4 of the pair (boundary points lean positive)
    int quadrant() const {
        return on_t1 >= 0 ? (on_t2 >= 0 ? 1 : 4) : (on_t2 >= 0 ? 2 : 3);
    }
    // the coordinate on the issue a vote is gained on for the given trade type
    double gain_coordinate(int trade_type) const { return trade_type <= 4 ? on_t1 : on_t2; }
    // the coordinate on the issue whose vote is given away
    double give_coordinate(int trade_type) const { return trade_type <= 4 ? on_t2 : on_t1; }
};

struct SolverOptions {
    int n = 11;                     // odd committee size
    double damping = 0.5;           // lambda in (0,1]
    int max_iterations = 300;
    double tolerance = 1e-7;        // sup-norm residual target
    int starts = 1;                 // multi-start count (naive + starts-1 random)
    std::uint64_t seed = 0;
    double integration_tol = 0.0;   // 0 = use the distribution's default
};

struct EquilibriumSolution {
    StrategyProfile theta_star;
    double residual = 0.0;
    int iterations = 0;
    TradeMode mode = TradeMode::Myopic;
    int n = 11;
    bool converged = false;
    std::array<bool, 8> defined{true, true, true, true, true, true, true, true};
};

}  // namespace vt
