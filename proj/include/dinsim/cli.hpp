#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dinsim/calibrate.hpp"
#include "dinsim/model.hpp"
#include "dinsim/montecarlo.hpp"

namespace dinsim::cli {

/// Everything a batch run needs, parsed from flat `section.key = value` text
/// plus repeatable --set overrides. Unknown keys are errors; values are
/// validated against module invariants before any run starts.
struct RunConfig {
    ModelParams model;

    double rho_min = 0.0;
    double rho_max = 8.0;
    double rho_step = 0.01;

    // anchor targets and tolerances (rho_star given as an interval)
    double anchor_bank_at_zero = 29.0;
    double anchor_bank_at_zero_tol = 0.5;
    double anchor_gap = 0.64;
    double anchor_gap_tol = 0.05;
    double anchor_rho_star_lo = 2.27;
    double anchor_rho_star_hi = 2.28;
    double anchor_clawback_rate = 0.623;
    double anchor_clawback_rate_tol = 0.02;

    // optional custom single-stage fit; empty = staged reference calibration
    std::vector<std::string> calibrate_anchors;
    std::vector<std::string> calibrate_knobs;

    std::uint64_t seed = 1;
    int n_funds = 1000;
    int investments_per_fund = 20;
    double mc_rho = 1.0;
    std::string mc_distribution = "two_point";
    double lognormal_mu = 0.0;
    double lognormal_sigma = 0.5;
    std::string empirical_csv_path;
    double empirical_dispersion = 0.5;

    std::string out_path;  // empty = per-command default

    void validate() const;  // throws ConfigError
};

void apply_key_value(RunConfig& config, const std::string& key, const std::string& value);
void parse_config_text(RunConfig& config, const std::string& text);

/// Reads the optional config file and applies --set overrides in order.
RunConfig load_config(const std::string& config_path, const std::vector<std::string>& overrides);

AnchorSet anchors_from_config(const RunConfig& config);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

std::vector<double> rho_grid_from_config(const RunConfig& config);

std::string sweep_csv(const RunConfig& config);
std::vector<SweepPoint> parse_sweep_csv(const std::string& text);

struct CalibrationRun {
    std::string report_text;
    bool converged = false;
};
CalibrationRun run_calibration(const RunConfig& config);

std::string mc_csv(const RunConfig& config);

struct ScenarioOutcome {
    std::string log_text;       // bit-exact ledger export
    std::string balances_text;  // one "account = amount" line per account
};
/// Runs a timed-action scenario: attach AMOUNT RATE HORIZON_MONTHS [WINDOW],
/// advance DAYS, settle-cash AMOUNT, settle-equity POLICY ALLOCATION,
/// bankruptcy FIRM_ASSETS. '#' starts a comment.
ScenarioOutcome run_scenario(const std::string& scenario_text);

// Command entry points: write the artifact, print a status line, and map
// errors onto the documented exit codes (0 ok, 1 residual out of tolerance,
// 2 config error, 3 I/O error, 4 invalid lifecycle transition).
int cmd_sweep(const RunConfig& config);
int cmd_calibrate(const RunConfig& config);
int cmd_mc(const RunConfig& config);
int cmd_lifecycle(const RunConfig& config, const std::string& scenario_path);

}  // namespace dinsim::cli
