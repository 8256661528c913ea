#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dinsim/ledger.hpp"
#include "dinsim/model.hpp"

namespace dinsim {

/// Counter-based generator (splitmix64 finalizer over a keyed counter).
/// Every draw is a pure function of (seed, fund, investment, draw index), so
/// funds can be simulated in any order or in parallel with identical output.
namespace rng {

std::uint64_t mix(std::uint64_t x);
std::uint64_t keyed(std::uint64_t seed, std::uint64_t fund, std::uint64_t investment,
                    std::uint64_t draw);
double uniform(std::uint64_t seed, std::uint64_t fund, std::uint64_t investment,
               std::uint64_t draw);
/// Standard normal via Box-Muller on two counter draws.
double normal(std::uint64_t seed, std::uint64_t fund, std::uint64_t investment,
              std::uint64_t draw_pair);

}  // namespace rng

struct OutcomeDistribution {
    enum class Kind { TwoPoint, LogNormal, EmpiricalCsv };

    Kind kind = Kind::TwoPoint;
    double winner_multiple = 1.6;  // TwoPoint
    double rho = 1.0;              // TwoPoint target mean
    double mu = 0.0;               // LogNormal
    double sigma = 0.0;
    std::vector<std::pair<double, double>> fund_multiples;  // EmpiricalCsv: (multiple, weight)
    double dispersion = 0.5;  // lognormal spread of investments around a fund mean

    static OutcomeDistribution two_point(double winner_multiple, double rho);
    static OutcomeDistribution log_normal(double mu, double sigma);
    static OutcomeDistribution empirical(std::vector<std::pair<double, double>> fund_multiples,
                                         double dispersion = 0.5);
    /// Header `multiple,weight` (weight column optional, default 1).
    static OutcomeDistribution empirical_from_csv(std::istream& in, double dispersion = 0.5);

    double mean() const;
};

struct SimConfig {
    std::uint64_t seed = 1;
    int n_funds = 1;
    int investments_per_fund = 20;
    ModelParams params;

    void validate() const;
};

/// Per-fund investment outcome multiples; deterministic in (seed, config, dist).
std::vector<std::vector<double>> sample_cohort(const SimConfig& config,
                                               const OutcomeDistribution& dist);

struct FundSim {
    double rho = 0.0;           // realized mean multiple of the fund
    double bank_multiple = 0.0; // consolidated insured-side net / original capital
    Money uw_net;
    Ledger ledger;              // full event log for the fund
};

/// Runs one fund's cohort through the contract lifecycle on a zero-sum
/// ledger: premiums, DIN payouts and asset transfers on defaults, equity
/// shares on survivors, and (with_clawback) lien attachment plus cash
/// settlement, or bankruptcy recovery when limited liability binds.
FundSim simulate_fund(const std::vector<double>& multiples, const ModelParams& params,
                      bool with_clawback);

struct SummaryStats {
    double mean = 0.0;
    double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
    double frac_past_breakeven = 0.0;  // share strictly above the break-even value
};

/// Quantiles by linear interpolation on the sorted values.
SummaryStats summarize(const std::vector<double>& values, double breakeven = 1.0);

}  // namespace dinsim
