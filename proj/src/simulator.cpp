#include "vt/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "vt/errors.hpp"
#include "vt/welfare.hpp"

namespace vt {

namespace {

struct OfferRule {
    double tan_p1[4];  // tan(theta_1..4), wedges measured from the x-axis
    double tan_p2[4];  // tan(theta_5..8), wedges measured from the y-axis

    explicit OfferRule(const StrategyProfile& theta) {
        for (int q = 0; q < 4; ++q) {
            tan_p1[q] = theta.tan_of(q);
            tan_p2[q] = theta.tan_of(q + 4);
        }
    }

    static int quadrant_index(UtilityPair u) {
        return u.on_t1 >= 0 ? (u.on_t2 >= 0 ? 0 : 3) : (u.on_t2 >= 0 ? 1 : 2);
    }

    // player-1 offer: give the t2 vote for an extra t1 vote
    bool offers_give_t2(UtilityPair u) const {
        const double ax = std::abs(u.on_t1), ay = std::abs(u.on_t2);
        const double t = tan_p1[quadrant_index(u)];
        if (std::isinf(t)) return ax > 0.0 || ay == 0.0;
        return ay <= ax * t;
    }

    bool offers_give_t1(UtilityPair u) const {
        const double ax = std::abs(u.on_t1), ay = std::abs(u.on_t2);
        const double t = tan_p2[quadrant_index(u)];
        if (std::isinf(t)) return ay > 0.0 || ax == 0.0;
        return ax <= ay * t;
    }
};

int vote_sign(double u) { return u > 0.0 ? 1 : -1; }  // zero votes against

// Pair (a,b): match offers and append an executed trade if any. Direction
// is a coin flip only when both combinations are executable, i.e. both
// voters offer both directions.
void match_pair(const OfferRule& rule, const std::vector<UtilityPair>& us, int a, int b,
                RngStream& rng, std::vector<ExecutedTrade>& trades) {
    const bool a_gives_t2 = rule.offers_give_t2(us[a]);
    const bool a_gives_t1 = rule.offers_give_t1(us[a]);
    const bool b_gives_t2 = rule.offers_give_t2(us[b]);
    const bool b_gives_t1 = rule.offers_give_t1(us[b]);
    const bool ab = a_gives_t2 && b_gives_t1;  // a plays role 1, b role 2
    const bool ba = b_gives_t2 && a_gives_t1;
    if (ab && ba) {
        if (rng.coin())
            trades.push_back({a, b});
        else
            trades.push_back({b, a});
    } else if (ab) {
        trades.push_back({a, b});
    } else if (ba) {
        trades.push_back({b, a});
    }
}

struct Tally {
    int t1 = 0;
    int t2 = 0;
};

Tally tally_votes(const std::vector<UtilityPair>& us, const std::vector<ExecutedTrade>& trades) {
    const int n = static_cast<int>(us.size());
    std::vector<int> ballot_t1(n), ballot_t2(n);
    for (int i = 0; i < n; ++i) {
        ballot_t1[i] = vote_sign(us[i].on_t1);
        ballot_t2[i] = vote_sign(us[i].on_t2);
    }
    for (const ExecutedTrade& tr : trades) {
        // the given-away vote is cast by the receiver's sign on that issue
        ballot_t1[tr.giver_t1] = vote_sign(us[tr.giver_t2].on_t1);
        ballot_t2[tr.giver_t2] = vote_sign(us[tr.giver_t1].on_t2);
    }
    Tally t;
    for (int i = 0; i < n; ++i) {
        t.t1 += ballot_t1[i];
        t.t2 += ballot_t2[i];
    }
    return t;
}

void check_sim_args(int n, long trials) {
    if (n < 3 || n % 2 == 0) throw domain_error("committee size n must be odd and >= 3");
    if (trials < 1) throw domain_error("trials must be >= 1");
}

// fixed-size chunks so parallel runs combine identically to serial ones
constexpr long kChunk = 8192;

template <class PerChunk>
void run_chunks(long total, std::vector<PerChunk>& partials,
                const std::function<void(long, long, long, PerChunk&)>& body) {
    const long chunks = (total + kChunk - 1) / kChunk;
    partials.assign(chunks, PerChunk{});
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(chunks));
    std::atomic<long> next{0};
    auto work = [&] {
        for (long c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
            const long begin = c * kChunk;
            const long end = std::min(total, begin + kChunk);
            body(c, begin, end, partials[c]);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }
}

Estimate from_moments(double sum, double sumsq, long count) {
    Estimate e;
    e.count = count;
    if (count < 1) return e;
    e.mean = sum / count;
    if (count > 1) {
        const double var = std::max(0.0, (sumsq - sum * sum / count) / (count - 1));
        e.std_error = std::sqrt(var / count);
    }
    return e;
}

}  // namespace

TrialRecord play_committee(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                           int n, SimMode mode, RngStream& rng) {
    check_sim_args(n, 1);
    const OfferRule rule(theta);
    TrialRecord rec;
    rec.utilities.reserve(n);
    for (int i = 0; i < n; ++i) {
        const Point p = dist.sample(rng);
        rec.utilities.push_back({p.x, p.y});
    }
    rec.offers.reserve(n);
    for (int i = 0; i < n; ++i)
        rec.offers.push_back({rule.offers_give_t2(rec.utilities[i]),
                              rule.offers_give_t1(rec.utilities[i])});

    if (mode == SimMode::SingleTrade) {
        match_pair(rule, rec.utilities, 0, 1, rng, rec.trades);
    } else {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i + 1))]);
        for (int i = 0; i + 1 < n; i += 2)  // odd n: order[n-1] sits out
            match_pair(rule, rec.utilities, order[i], order[i + 1], rng, rec.trades);
    }

    const Tally with = tally_votes(rec.utilities, rec.trades);
    const Tally without = tally_votes(rec.utilities, {});
    rec.outcome_t1 = with.t1 > 0 ? 1 : -1;
    rec.outcome_t2 = with.t2 > 0 ? 1 : -1;
    rec.counterfactual_t1 = without.t1 > 0 ? 1 : -1;
    rec.counterfactual_t2 = without.t2 > 0 ? 1 : -1;
    double sum_t1 = 0.0, sum_t2 = 0.0;
    for (const UtilityPair& u : rec.utilities) {
        sum_t1 += u.on_t1;
        sum_t2 += u.on_t2;
    }
    rec.group_welfare = rec.outcome_t1 * sum_t1 + rec.outcome_t2 * sum_t2;
    rec.counterfactual_welfare =
        rec.counterfactual_t1 * sum_t1 + rec.counterfactual_t2 * sum_t2;
    rec.group_delta = rec.group_welfare - rec.counterfactual_welfare;
    return rec;
}

SimulationReport simulate(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                          int n, SimMode mode, long trials, std::uint64_t seed) {
    check_sim_args(n, trials);
    const TradeMode tmode =
        mode == SimMode::SingleTrade ? TradeMode::Myopic : TradeMode::Groupwide;
    const WelfareBoundarySet bene = welfare_coefficients(dist, theta, n, tmode);

    struct Partial {
        long trades = 0;
        double trader_sum = 0.0, trader_sumsq = 0.0;
        double group_sum = 0.0, group_sumsq = 0.0;
        long positive = 0;
        double bene_sum = 0.0, bene_sumsq = 0.0;
        long flips1 = 0, flips2 = 0;
    };
    std::vector<Partial> partials;
    std::function<void(long, long, long, Partial&)> body = [&](long, long begin, long end,
                                                               Partial& pt) {
        for (long trial = begin; trial < end; ++trial) {
            RngStream rng(seed, static_cast<std::uint64_t>(trial));
            const TrialRecord rec = play_committee(dist, theta, n, mode, rng);
            pt.group_sum += rec.group_delta;
            pt.group_sumsq += rec.group_delta * rec.group_delta;
            if (rec.outcome_t1 != rec.counterfactual_t1) ++pt.flips1;
            if (rec.outcome_t2 != rec.counterfactual_t2) ++pt.flips2;
            const int d1 = rec.outcome_t1 - rec.counterfactual_t1;
            const int d2 = rec.outcome_t2 - rec.counterfactual_t2;
            for (const ExecutedTrade& tr : rec.trades) {
                ++pt.trades;
                const UtilityPair& u1 = rec.utilities[tr.giver_t2];  // role 1
                const UtilityPair& u2 = rec.utilities[tr.giver_t1];  // role 2
                const double delta1 = d1 * u1.on_t1 + d2 * u1.on_t2;
                const double delta2 = d1 * u2.on_t1 + d2 * u2.on_t2;
                const double v = 0.5 * (delta1 + delta2);
                pt.trader_sum += v;
                pt.trader_sumsq += v * v;
                if (rec.group_delta > 0.0) ++pt.positive;
                double w = 0.0;
                if (bene.group_value(u1.quadrant(), u1) >= 0.0) w += 0.5;
                if (bene.group_value(u2.quadrant() + 4, u2) >= 0.0) w += 0.5;
                pt.bene_sum += w;
                pt.bene_sumsq += w * w;
            }
        }
    };
    run_chunks(trials, partials, body);

    Partial tot;
    for (const Partial& pt : partials) {
        tot.trades += pt.trades;
        tot.trader_sum += pt.trader_sum;
        tot.trader_sumsq += pt.trader_sumsq;
        tot.group_sum += pt.group_sum;
        tot.group_sumsq += pt.group_sumsq;
        tot.positive += pt.positive;
        tot.bene_sum += pt.bene_sum;
        tot.bene_sumsq += pt.bene_sumsq;
        tot.flips1 += pt.flips1;
        tot.flips2 += pt.flips2;
    }

    SimulationReport rep;
    rep.trials = trials;
    rep.trades_executed = tot.trades;
    rep.trader_value_per_trade = from_moments(tot.trader_sum, tot.trader_sumsq, tot.trades);
    rep.group_delta_per_trial = from_moments(tot.group_sum, tot.group_sumsq, trials);
    rep.positive_realized_fraction = from_moments(
        static_cast<double>(tot.positive),
        static_cast<double>(tot.positive), tot.trades);  // indicator: sumsq == sum
    rep.beneficial_expected_fraction = from_moments(tot.bene_sum, tot.bene_sumsq, tot.trades);
    rep.flip_rate_t1 = static_cast<double>(tot.flips1) / trials;
    rep.flip_rate_t2 = static_cast<double>(tot.flips2) / trials;
    rep.n = n;
    rep.mode = mode;
    rep.seed = seed;
    return rep;
}

Estimate empirical_trade_value(const JointUtilityDistribution& dist,
                               const StrategyProfile& theta, int n, int trade_type,
                               UtilityPair u, long trials, std::uint64_t seed) {
    check_sim_args(n, trials);
    if (trade_type < 1 || trade_type > 8) throw domain_error("trade_type must be in 1..8");
    const int quadrant = (trade_type - 1) % 4 + 1;
    const double sx = (quadrant == 1 || quadrant == 4) ? 1.0 : -1.0;
    const double sy = (quadrant == 1 || quadrant == 2) ? 1.0 : -1.0;
    if (sx * u.on_t1 < 0.0 || sy * u.on_t2 < 0.0)
        throw domain_error("utility pair is outside the trade type's quadrant");
    const OfferRule rule(theta);
    const bool focal_role1 = trade_type <= 4;
    constexpr int kRejectionCap = 100000;

    struct Partial {
        double sum = 0.0, sumsq = 0.0;
    };
    std::vector<Partial> partials;
    std::function<void(long, long, long, Partial&)> body = [&](long, long begin, long end,
                                                               Partial& pt) {
        for (long trial = begin; trial < end; ++trial) {
            RngStream rng(seed, static_cast<std::uint64_t>(trial));
            std::vector<UtilityPair> us(n);
            us[0] = u;
            // partner conditioned on the complementary offer
            bool found = false;
            for (int k = 0; k < kRejectionCap; ++k) {
                const Point p = dist.sample(rng);
                const UtilityPair cand{p.x, p.y};
                const bool complement =
                    focal_role1 ? rule.offers_give_t1(cand) : rule.offers_give_t2(cand);
                if (complement) {
                    us[1] = cand;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw no_partner_error(
                    "partner rejection sampling exhausted: complementary offer region has "
                    "(near) zero mass");
            for (int i = 2; i < n; ++i) {
                const Point p = dist.sample(rng);
                us[i] = {p.x, p.y};
            }
            std::vector<ExecutedTrade> trades;
            if (focal_role1)
                trades.push_back({0, 1});
            else
                trades.push_back({1, 0});
            const Tally with = tally_votes(us, trades);
            const Tally without = tally_votes(us, {});
            const int d1 = (with.t1 > 0 ? 1 : -1) - (without.t1 > 0 ? 1 : -1);
            const int d2 = (with.t2 > 0 ? 1 : -1) - (without.t2 > 0 ? 1 : -1);
            const double delta = d1 * u.on_t1 + d2 * u.on_t2;
            pt.sum += delta;
            pt.sumsq += delta * delta;
        }
    };
    run_chunks(trials, partials, body);
    double sum = 0.0, sumsq = 0.0;
    for (const Partial& pt : partials) {
        sum += pt.sum;
        sumsq += pt.sumsq;
    }
    return from_moments(sum, sumsq, trials);
}

EffectiveQEstimate empirical_effective_q(const JointUtilityDistribution& dist,
                                         const StrategyProfile& theta, int n, long trials,
                                         std::uint64_t seed) {
    check_sim_args(n, trials);
    if (n < 5) throw domain_error("effective-q estimation needs n >= 5");
    const OfferRule rule(theta);

    struct Partial {
        long plus1 = 0, plus2 = 0;
    };
    std::vector<Partial> partials;
    std::function<void(long, long, long, Partial&)> body = [&](long, long begin, long end,
                                                               Partial& pt) {
        for (long trial = begin; trial < end; ++trial) {
            RngStream rng(seed, static_cast<std::uint64_t>(trial));
            std::vector<UtilityPair> us(n);
            for (int i = 0; i < n; ++i) {
                const Point p = dist.sample(rng);
                us[i] = {p.x, p.y};
            }
            // voters 0,1 form the focal pair; the other n-2 pair up with one
            // left out, and voter 2 is the watched bystander
            std::vector<int> order;
            order.reserve(n - 2);
            for (int i = 2; i < n; ++i) order.push_back(i);
            for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
                std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i + 1))]);
            std::vector<ExecutedTrade> trades;
            for (int i = 0; i + 1 < static_cast<int>(order.size()); i += 2)
                match_pair(rule, us, order[i], order[i + 1], rng, trades);
            std::vector<int> ballot_t1(n), ballot_t2(n);
            for (int i = 0; i < n; ++i) {
                ballot_t1[i] = vote_sign(us[i].on_t1);
                ballot_t2[i] = vote_sign(us[i].on_t2);
            }
            for (const ExecutedTrade& tr : trades) {
                ballot_t1[tr.giver_t1] = vote_sign(us[tr.giver_t2].on_t1);
                ballot_t2[tr.giver_t2] = vote_sign(us[tr.giver_t1].on_t2);
            }
            if (ballot_t1[2] > 0) ++pt.plus1;
            if (ballot_t2[2] > 0) ++pt.plus2;
        }
    };
    run_chunks(trials, partials, body);
    long p1 = 0, p2 = 0;
    for (const Partial& pt : partials) {
        p1 += pt.plus1;
        p2 += pt.plus2;
    }
    EffectiveQEstimate est;
    est.q1_plus = from_moments(static_cast<double>(p1), static_cast<double>(p1), trials);
    est.q2_plus = from_moments(static_cast<double>(p2), static_cast<double>(p2), trials);
    return est;
}

}  // namespace vt
