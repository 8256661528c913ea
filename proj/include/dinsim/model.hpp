#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dinsim/money.hpp"

namespace dinsim {

/// How the underwriter's reserve against potential payouts is sized.
/// GrossPayout holds the full expected payout (invested funds do not depend
/// on the clawback rate, matching the same zero-invested-funds boundary with
/// and without the lien); NetOfClawback nets out the lien's initial claim.
enum class ReserveRule { GrossPayout, NetOfClawback };

const char* to_string(ReserveRule rule);

struct ModelParams {
    Money original_capital = Money::from_units(1);
    double moc = 43.0;                  // multiple of original capital, hard bound [2, 47]
    int horizon_years = 10;
    double deal_duration_years = 10.0;  // D
    double premium_rate = 0.05;         // p, per year on covered face
    double equity_share = 0.5;          // e
    double clawback_rate = 0.623;       // L
    double coverage = 1.0;
    double funds_cost_rate = 0.0;       // underwriter's annual cost of carried funds
    double winner_multiple = 1.6;       // g, TwoPoint outcome knob
    bool limited_liability = true;
    ReserveRule reserve_rule = ReserveRule::GrossPayout;

    void validate() const;  // throws MocOutOfRange / InvalidParams

    ModelParams with_clawback(double l) const {
        ModelParams p = *this;
        p.clawback_rate = l;
        return p;
    }
};

/// Distributional realization of the aggregate conventional return rho:
/// a weighted list of outcome multiples with mean exactly rho.
struct OutcomeTemplate {
    enum class Kind { TwoPoint, Empirical };

    Kind kind = Kind::TwoPoint;
    double winner_multiple = 1.6;                        // TwoPoint only
    std::vector<std::pair<double, double>> outcomes;     // Empirical: (multiple, weight)

    static OutcomeTemplate two_point(double winner_multiple);
    static OutcomeTemplate empirical(std::vector<std::pair<double, double>> outcomes);

    /// Outcome multiples and weights at aggregate return rho. Weights are
    /// non-negative, sum to 1, and the weighted mean equals rho to 1e-9.
    /// TwoPoint: losers at 0 with weight 1 - rho/g, winners at g; for
    /// rho > g the cohort degenerates to a single point at rho.
    std::vector<std::pair<double, double>> weights_at(double rho) const;
};

/// One sweep sample. Money fields are exact fixed-point; reals are doubles.
struct CurvePoint {
    double rho = 0.0;
    double bank_multiple = 0.0;
    std::optional<double> uw_return_on_invested;  // undefined once invested funds hit zero
    Money uw_per_dollar_insured;
    Money uw_invested_funds;
};

struct SweepPoint {
    CurvePoint baseline;   // clawback_rate forced to 0
    CurvePoint clawback;   // clawback_rate as configured
};

struct UnderwriterCashflow {
    Money net;
    Money invested_funds;
    Money per_dollar;
    std::optional<double> return_on_invested;
};

/// Total DIN-insured investment F = moc x original capital.
Money insured_face(const ModelParams& params);

/// Net deal-horizon bank position as a multiple of original capital, at the
/// params' clawback rate (0 = baseline). With limited liability the lien
/// recovery is capped at the bank's positive baseline position.
double bank_return(const ModelParams& params, double rho);
double bank_return(const ModelParams& params, double rho, const OutcomeTemplate& tmpl);

UnderwriterCashflow underwriter_cashflow(const ModelParams& params, double rho);
UnderwriterCashflow underwriter_cashflow(const ModelParams& params, double rho,
                                         const OutcomeTemplate& tmpl);

/// bank_return(0) / bank_return(rho_top) - 1 on the baseline (no-clawback)
/// curve; rho_top = 1.5, the top of the normal portfolio range.
double perverse_incentive_gap(const ModelParams& params);

std::vector<SweepPoint> sweep(const ModelParams& params, const std::vector<double>& rho_grid);
std::vector<SweepPoint> sweep(const ModelParams& params, const std::vector<double>& rho_grid,
                              const OutcomeTemplate& tmpl);

/// rho = 0.00 .. 8.00, step 0.01 (801 points).
std::vector<double> default_rho_grid();

// Shaded-region bounds used across the figures.
inline constexpr double kNormalRangeLow = 0.9;
inline constexpr double kNormalRangeHigh = 1.5;
inline constexpr double kRhoTop = kNormalRangeHigh;
inline constexpr double kZeroInvestedLow = 2.27;
inline constexpr double kZeroInvestedHigh = 8.0;

// Double-precision internals shared with the calibrators.
double underwriter_net_per_face(const ModelParams& params, double rho);
double invested_funds_per_face(const ModelParams& params, double rho);

}  // namespace dinsim
