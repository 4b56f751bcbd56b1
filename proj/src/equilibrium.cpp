#include "vt/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "vt/errors.hpp"

namespace vt {

namespace {

constexpr double kQClampEps = 1e-12;

void check_odd_n(int n) {
    if (n < 3 || n % 2 == 0) throw domain_error("committee size n must be odd and >= 3");
}

double clamp_q(double q) { return std::clamp(q, kQClampEps, 1.0 - kQClampEps); }

void check_positive_q(const QuadProbabilities& q) {
    if (q.q1_plus <= 0.0 || q.q1_minus <= 0.0 || q.q2_plus <= 0.0 || q.q2_minus <= 0.0)
        throw domain_error("a half-square vote probability is zero; trading breaks down");
}

}  // namespace

double swing_binomial(int n) {
    check_odd_n(n);
    const int k = (n - 3) / 2;
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - 2 - k + i) / i;
    return v;
}

PivotFactors pivot_factors(const QuadProbabilities& q, int n) {
    const int e_hi = (n - 1) / 2;
    const int e_lo = (n - 3) / 2;
    PivotFactors p;
    const double q1p = clamp_q(q.q1_plus), q1m = clamp_q(q.q1_minus);
    const double q2p = clamp_q(q.q2_plus), q2m = clamp_q(q.q2_minus);
    p.toward_plus_t1 = std::pow(q1m, e_hi) * std::pow(q1p, e_lo);
    p.toward_minus_t1 = std::pow(q1m, e_lo) * std::pow(q1p, e_hi);
    p.toward_plus_t2 = std::pow(q2m, e_hi) * std::pow(q2p, e_lo);
    p.toward_minus_t2 = std::pow(q2m, e_lo) * std::pow(q2p, e_hi);
    return p;
}

TradeCoefficients trade_coefficients(const std::array<double, 8>& im, const QuadProbabilities& q,
                                     int n) {
    const PivotFactors p = pivot_factors(q, n);
    const double i56 = im[4] + im[5], i67 = im[5] + im[6];
    const double i78 = im[6] + im[7], i58 = im[4] + im[7];
    const double i12 = im[0] + im[1], i23 = im[1] + im[2];
    const double i34 = im[2] + im[3], i14 = im[0] + im[3];
    TradeCoefficients c;
    c.gain[0] = i67 * p.toward_plus_t1;   c.loss[0] = i78 * p.toward_minus_t2;
    c.gain[1] = i58 * p.toward_minus_t1;  c.loss[1] = i78 * p.toward_minus_t2;
    c.gain[2] = i58 * p.toward_minus_t1;  c.loss[2] = i56 * p.toward_plus_t2;
    c.gain[3] = i67 * p.toward_plus_t1;   c.loss[3] = i56 * p.toward_plus_t2;
    c.gain[4] = i34 * p.toward_plus_t2;   c.loss[4] = i23 * p.toward_minus_t1;
    c.gain[5] = i34 * p.toward_plus_t2;   c.loss[5] = i14 * p.toward_plus_t1;
    c.gain[6] = i12 * p.toward_minus_t2;  c.loss[6] = i14 * p.toward_plus_t1;
    c.gain[7] = i12 * p.toward_minus_t2;  c.loss[7] = i23 * p.toward_minus_t1;
    return c;
}

QuadProbabilities quad_probabilities(const std::array<double, 8>& im, const HalfPlaneStats& half,
                                     int n, TradeMode mode) {
    if (mode == TradeMode::Groupwide) {
        const EffectiveQSet eq = effective_q_from(im, half, n);
        return {eq.q1_plus, eq.q1_minus, eq.q2_plus, eq.q2_minus};
    }
    return {half.q1_plus, half.q1_minus, half.q2_plus, half.q2_minus};
}

BestResponseResult best_response_from_masses(const std::array<double, 8>& im,
                                             const HalfPlaneStats& half, int n, TradeMode mode,
                                             const StrategyProfile& prev) {
    const QuadProbabilities q = quad_probabilities(im, half, n, mode);
    check_positive_q(q);
    const TradeCoefficients c = trade_coefficients(im, q, n);
    BestResponseResult out;
    for (int i = 0; i < 8; ++i) {
        if (c.loss[i] > 0.0) {
            out.theta[i] = std::atan(c.gain[i] / c.loss[i]);
            out.defined[i] = true;
        } else if (c.gain[i] > 0.0) {
            out.theta[i] = kHalfPi;
            out.defined[i] = true;
        } else {
            out.theta[i] = prev[i];  // 0/0: hold the previous value
            out.defined[i] = false;
        }
    }
    return out;
}

double pivot_probability(double q_minus, double q_plus, int n) {
    check_odd_n(n);
    if (!(q_minus >= 0.0) || !(q_plus >= 0.0) || q_minus > 1.0 || q_plus > 1.0)
        throw domain_error("pivot probabilities must lie in [0,1]");
    if (std::abs(q_minus + q_plus - 1.0) > 1e-6)
        throw domain_error("pivot probabilities must sum to 1");
    const int e_hi = (n - 1) / 2;
    const int e_lo = (n - 3) / 2;
    return swing_binomial(n) * std::pow(q_minus, e_hi) * std::pow(q_plus, e_lo);
}

double TradeValueModel::value(int trade_type, UtilityPair u) const {
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
    const double u_gain = std::abs(trade_type <= 4 ? u.on_t1 : u.on_t2);
    const double u_give = std::abs(trade_type <= 4 ? u.on_t2 : u.on_t1);
    return 2.0 * binom / partner_mass * (gain[i] * u_gain - loss[i] * u_give);
}

double TradeValueModel::boundary_tan(int trade_type) const {
    const int i = trade_type - 1;
    if (loss[i] > 0.0) return gain[i] / loss[i];
    if (gain[i] > 0.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

TradeValueModel make_trade_model(const JointUtilityDistribution& dist,
                                 const StrategyProfile& theta, int n, TradeMode mode,
                                 double tol) {
    check_odd_n(n);
    const HalfPlaneStats half = half_plane_stats(dist, tol);
    const std::array<double, 8> im = region_masses(dist, theta, tol);
    const QuadProbabilities q = quad_probabilities(im, half, n, mode);
    check_positive_q(q);
    const TradeCoefficients c = trade_coefficients(im, q, n);
    TradeValueModel model;
    model.n = n;
    model.mode = mode;
    model.gain = c.gain;
    model.loss = c.loss;
    model.player1_sum = im[0] + im[1] + im[2] + im[3];
    model.player2_sum = im[4] + im[5] + im[6] + im[7];
    model.binom = swing_binomial(n);
    for (int i = 0; i < 8; ++i) model.defined[i] = c.gain[i] > 0.0 || c.loss[i] > 0.0;
    return model;
}

double trade_expected_value(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                            int n, int trade_type, UtilityPair u, TradeMode mode, double tol) {
    return make_trade_model(dist, theta, n, mode, tol).value(trade_type, u);
}

BestResponseResult best_response(const JointUtilityDistribution& dist,
                                 const StrategyProfile& theta, int n, TradeMode mode,
                                 double tol) {
    check_odd_n(n);
    const HalfPlaneStats half = half_plane_stats(dist, tol);
    const std::array<double, 8> im = region_masses(dist, theta, tol);
    return best_response_from_masses(im, half, n, mode, theta);
}

double residual(const JointUtilityDistribution& dist, const StrategyProfile& theta, int n,
                TradeMode mode, double tol) {
    const BestResponseResult br = best_response(dist, theta, n, mode, tol);
    double r = 0.0;
    for (int i = 0; i < 8; ++i)
        if (br.defined[i]) r = std::max(r, std::abs(br.theta[i] - theta[i]));
    return r;
}

bool offers_trade(const StrategyProfile& theta, int trade_type, UtilityPair u) {
    if (trade_type < 1 || trade_type > 8) throw domain_error("trade_type must be in 1..8");
    const int quadrant = (trade_type - 1) % 4 + 1;
    const double sx = (quadrant == 1 || quadrant == 4) ? 1.0 : -1.0;
    const double sy = (quadrant == 1 || quadrant == 2) ? 1.0 : -1.0;
    if (sx * u.on_t1 < 0.0 || sy * u.on_t2 < 0.0) return false;
    const double t = theta.tan_of(trade_type - 1);
    const double gain = std::abs(trade_type <= 4 ? u.on_t1 : u.on_t2);
    const double give = std::abs(trade_type <= 4 ? u.on_t2 : u.on_t1);
    if (std::isinf(t)) return gain > 0.0 || give == 0.0;
    return give <= gain * t;
}

double theta_min_bound(const HalfPlaneStats& half, int n) {
    const PivotFactors p =
        pivot_factors({half.q1_plus, half.q1_minus, half.q2_plus, half.q2_minus}, n);
    double qmin = std::numeric_limits<double>::infinity();
    for (double num : {p.toward_plus_t1, p.toward_minus_t1})
        for (double den : {p.toward_plus_t2, p.toward_minus_t2}) {
            qmin = std::min(qmin, num / den);
            qmin = std::min(qmin, den / num);
        }
    return std::atan(qmin);
}

StrategyProfile project_to_existence_region(StrategyProfile theta, double theta_min) {
    static constexpr int pairs[4][2] = {{0, 2}, {1, 3}, {4, 6}, {5, 7}};
    for (const auto& pr : pairs) {
        double& a = theta[pr[0]];
        double& b = theta[pr[1]];
        const double sum = a + b;
        if (sum >= theta_min) continue;
        if (sum <= 0.0) {
            a = b = theta_min / 2.0;
        } else {
            const double scale = theta_min / sum;
            a = std::min(a * scale, kHalfPi);
            b = std::min(b * scale, kHalfPi);
        }
    }
    return theta;
}

EquilibriumSolution solve_equilibrium_from(const JointUtilityDistribution& dist,
                                           const SolverOptions& opts, TradeMode mode,
                                           const StrategyProfile& start) {
    check_odd_n(opts.n);
    if (!(opts.damping > 0.0) || opts.damping > 1.0)
        throw domain_error("damping must lie in (0, 1]");
    const double tol = opts.integration_tol;
    const HalfPlaneStats half = half_plane_stats(dist, tol);
    check_positive_q({half.q1_plus, half.q1_minus, half.q2_plus, half.q2_minus});
    const double theta_min = theta_min_bound(half, opts.n);

    StrategyProfile theta = project_to_existence_region(start, theta_min);
    double lambda = opts.damping;
    double prev_res = std::numeric_limits<double>::infinity();
    std::vector<double> history;
    history.reserve(opts.max_iterations);

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        const std::array<double, 8> im = region_masses(dist, theta, tol);
        const BestResponseResult br = best_response_from_masses(im, half, opts.n, mode, theta);
        double res = 0.0;
        for (int i = 0; i < 8; ++i)
            if (br.defined[i]) res = std::max(res, std::abs(br.theta[i] - theta[i]));
        history.push_back(res);
        if (res <= opts.tolerance) {
            EquilibriumSolution sol;
            sol.theta_star = theta;
            sol.residual = res;
            sol.iterations = iter;
            sol.mode = mode;
            sol.n = opts.n;
            sol.converged = true;
            sol.defined = br.defined;
            return sol;
        }
        if (res > prev_res) lambda = std::max(lambda * 0.5, 1.0 / 64.0);
        prev_res = res;
        StrategyProfile next;
        for (int i = 0; i < 8; ++i)
            next[i] = (1.0 - lambda) * theta[i] + lambda * br.theta[i];
        theta = project_to_existence_region(next, theta_min);
    }
    throw nonconvergence_error(
        "fixed-point iteration did not reach tolerance " + std::to_string(opts.tolerance) +
            " in " + std::to_string(opts.max_iterations) + " iterations",
        history, std::vector<double>(theta.theta.begin(), theta.theta.end()));
}

EquilibriumSolution solve_equilibrium(const JointUtilityDistribution& dist,
                                      const SolverOptions& opts, TradeMode mode) {
    return solve_equilibrium_from(dist, opts, mode, StrategyProfile::naive());
}

MultiStartResult find_equilibria(const JointUtilityDistribution& dist, const SolverOptions& opts,
                                 TradeMode mode) {
    if (opts.starts < 1) throw domain_error("starts must be >= 1");
    const HalfPlaneStats half = half_plane_stats(dist, opts.integration_tol);
    const double theta_min = theta_min_bound(half, opts.n);

    std::vector<StrategyProfile> starts;
    starts.push_back(StrategyProfile::naive());
    for (int s = 1; s < opts.starts; ++s) {
        RngStream rng(opts.seed, static_cast<std::uint64_t>(s));
        StrategyProfile p;
        for (int i = 0; i < 8; ++i) p[i] = rng.uniform(0.0, kHalfPi);
        starts.push_back(project_to_existence_region(p, theta_min));
    }

    std::vector<std::future<EquilibriumSolution>> futures;
    futures.reserve(starts.size());
    for (const StrategyProfile& st : starts) {
        futures.push_back(std::async(std::launch::async, [&dist, &opts, mode, st] {
            return solve_equilibrium_from(dist, opts, mode, st);
        }));
    }

    MultiStartResult out;
    out.starts_attempted = static_cast<int>(starts.size());
    constexpr double kDedupTol = 1e-4;
    for (auto& fut : futures) {
        EquilibriumSolution sol;
        try {
            sol = fut.get();
        } catch (const nonconvergence_error&) {
            continue;  // recorded via starts_converged below
        }
        ++out.starts_converged;
        const bool duplicate =
            std::any_of(out.solutions.begin(), out.solutions.end(),
                        [&](const EquilibriumSolution& have) {
                            return have.theta_star.sup_distance(sol.theta_star) <= kDedupTol;
                        });
        if (!duplicate) out.solutions.push_back(sol);
    }
    return out;
}

}  // namespace vt
