#pragma once

#include <cstdint>
#include <vector>

#include "vt/distribution.hpp"
#include "vt/equilibrium_types.hpp"
#include "vt/rng.hpp"

namespace vt {

enum class SimMode { SingleTrade, AllPairs };

struct ExecutedTrade {
    int giver_t2 = -1;  // voter playing role 1: gives the t2 vote, gains t1
    int giver_t1 = -1;  // voter playing role 2: gives the t1 vote, gains t2
};

struct TrialRecord {
    std::vector<UtilityPair> utilities;
    // per voter: [0] offers to give t2 (player-1 role), [1] offers to give t1
    std::vector<std::array<bool, 2>> offers;
    std::vector<ExecutedTrade> trades;
    int outcome_t1 = -1;           // +1 passes, -1 fails
    int outcome_t2 = -1;
    int counterfactual_t1 = -1;    // sincere voting, no trades
    int counterfactual_t2 = -1;
    double group_welfare = 0.0;    // I_t1 * sum(T1) + I_t2 * sum(T2)
    double counterfactual_welfare = 0.0;
    double group_delta = 0.0;      // group_welfare - counterfactual_welfare
};

// One play of the three-stage game: sample utilities, offer + match trades
// (voters 1 and 2 in single-trade mode; random pairing with one voter left
// out in all-pairs mode), then sincere voting with delegated ballots.
TrialRecord play_committee(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                           int n, SimMode mode, RngStream& rng);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    long count = 0;
};

struct SimulationReport {
    long trials = 0;
    long trades_executed = 0;
    // realized utility change of the trading parties, averaged within each
    // executed trade, per trade
    Estimate trader_value_per_trade;
    // realized group welfare change vs the no-trade counterfactual, per trial
    Estimate group_delta_per_trial;
    // fraction of executed trades whose realized group delta is positive
    Estimate positive_realized_fraction;
    // fraction of executed trades whose parties' utility pairs fall in the
    // analytic group-beneficial region (each party weighted 1/2)
    Estimate beneficial_expected_fraction;
    double flip_rate_t1 = 0.0;  // fraction of trials where the outcome moved
    double flip_rate_t2 = 0.0;
    int n = 11;
    SimMode mode = SimMode::SingleTrade;
    std::uint64_t seed = 0;
};

// Aggregates play_committee over `trials` committees. Reproducible for a
// fixed seed regardless of worker count: trials derive their streams from
// (seed, trial index) and partial sums combine in fixed chunk order.
SimulationReport simulate(const JointUtilityDistribution& dist, const StrategyProfile& theta,
                          int n, SimMode mode, long trials, std::uint64_t seed);

// Holds the focal trader at u, samples the partner conditionally on the
// complementary offer, plays out the single forced trade and averages the
// trader's realized utility delta.
Estimate empirical_trade_value(const JointUtilityDistribution& dist,
                               const StrategyProfile& theta, int n, int trade_type,
                               UtilityPair u, long trials, std::uint64_t seed);

struct EffectiveQEstimate {
    Estimate q1_plus;  // P(random non-focal voter's final ballot supports t1)
    Estimate q2_plus;
};

// Measures the Appendix-D effective probabilities: a focal pair is set
// aside, the remaining n-2 voters pair up (one left out) and trade, and a
// designated bystander's final ballots are tallied.
EffectiveQEstimate empirical_effective_q(const JointUtilityDistribution& dist,
                                         const StrategyProfile& theta, int n, long trials,
                                         std::uint64_t seed);

}  // namespace vt
