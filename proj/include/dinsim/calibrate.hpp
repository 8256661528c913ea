#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dinsim/model.hpp"
#include "dinsim/money.hpp"

namespace dinsim {

struct Anchor {
    enum class Kind { BankAtZero, Gap64, RhoStar, ClawbackRateReference };

    Kind kind;
    std::string name;
    double target;
    double tolerance;  // > 0; interval anchors use midpoint +/- half-width
};

using AnchorSet = std::vector<Anchor>;

/// bank_at_zero = 29 +/- 0.5, gap_64 = 0.64 +/- 0.05,
/// rho_star = 2.275 +/- 0.005, clawback_rate_reference = 0.623 +/- 0.02.
AnchorSet default_anchors();

enum class Knob { Moc, DealDuration, WinnerMultiple, FundsCost, ReserveRuleVariant };

const char* to_string(Knob knob);

struct AnchorResidual {
    std::string name;
    double target = 0.0;
    double tolerance = 1.0;
    double value = 0.0;       // meaningful only when evaluable
    double residual = 0.0;    // signed, (value - target) / tolerance
    bool evaluable = false;
    bool within = false;
};

struct CalibrationReport {
    ModelParams params;
    std::vector<AnchorResidual> residuals;  // one per anchor, hit or missed
    bool converged = false;
    int iterations = 0;                     // objective evaluations during refinement
};

/// Smallest L in [0, 1] with net(L) >= epsilon, for a monotone net. Bisection
/// to |dL| < 1e-6. Throws NotMonotone on a decreasing sample pattern and
/// NotBracketed when net(1) < epsilon.
double solve_clawback_root(const std::function<double(double)>& net_of_rate, double epsilon);

/// Smallest clawback rate making the underwriter's net at rho = 0 at least
/// epsilon, under the given params (the cap and reserve rule matter).
double solve_clawback_rate(const ModelParams& params, Money epsilon = Money{});

/// Left edge of the region where fn(x) <= 0, scanned on [lo, hi] with the
/// given step and refined by bisection to 1e-4. fn must be non-increasing.
double find_zero_crossing(const std::function<double(double)>& fn, double lo, double hi,
                          double step);

/// Smallest rho where the underwriter's invested funds reach zero, on the
/// baseline (no-clawback) curve, grid 0..8 step 0.01 refined to 1e-4.
double find_rho_star(const ModelParams& params);

/// Grid search over the free knobs followed by per-coordinate bisection
/// (golden section) on the max normalized residual. Deterministic; ties go
/// to the lexicographically first knob vector in declared knob order.
CalibrationReport fit_anchors(const AnchorSet& anchors, const std::vector<Knob>& free_knobs,
                              const ModelParams& start);

struct StaticsRow {
    std::string knob;
    double lstar_base;
    double lstar_up;    // knob * 1.1
    double lstar_down;  // knob * 0.9
    int direction;      // sign of (lstar_up - lstar_base)
};

/// L* response to +/-10% perturbations of premium_rate and funds_cost_rate.
std::vector<StaticsRow> comparative_statics(const ModelParams& params);

/// The knob regime where the reference clawback rate is priced: flat premiums
/// over the full default deal duration, uncapped lien demand, gross reserve.
ModelParams pricing_regime(const ModelParams& base);

/// Staged reference calibration: fit {moc, deal duration, winner multiple} to
/// the bank-at-zero and gap anchors, evaluate rho_star on that knob set, then
/// fit the funds cost to the clawback-rate anchor on the pricing regime.
struct ReferenceCalibration {
    CalibrationReport portfolio_fit;
    CalibrationReport clawback_fit;
    std::vector<AnchorResidual> combined;  // every anchor in the input set
    double lstar = 0.0;
    bool converged = false;                // all anchors within tolerance
};

ReferenceCalibration run_reference_calibration(const ModelParams& start, const AnchorSet& anchors);

}  // namespace dinsim
