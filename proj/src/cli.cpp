#include "dinsim/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dinsim/errors.hpp"
#include "dinsim/lifecycle.hpp"

namespace dinsim::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
    return out;
}

long long parse_int(const std::string& key, const std::string& value) {
    long long out = 0;
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("bad integer value for " + key + ": '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("bad boolean value for " + key + ": '" + value + "'");
}

}  // namespace

void RunConfig::validate() const {
    try {
        model.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    if (!(rho_step > 0.0)) throw ConfigError("sweep.rho_step must be > 0");
    if (rho_min < 0.0) throw ConfigError("sweep.rho_min must be >= 0");
    if (!(anchor_bank_at_zero_tol > 0.0) || !(anchor_gap_tol > 0.0) ||
        !(anchor_clawback_rate_tol > 0.0))
        throw ConfigError("anchor tolerances must be > 0");
    if (!(anchor_rho_star_hi > anchor_rho_star_lo))
        throw ConfigError("anchors.rho_star interval must have positive width");
    if (n_funds < 1) throw ConfigError("mc.n_funds must be >= 1");
    if (investments_per_fund < 1) throw ConfigError("mc.investments_per_fund must be >= 1");
    if (mc_rho < 0.0) throw ConfigError("mc.rho must be >= 0");
    if (mc_distribution != "two_point" && mc_distribution != "log_normal" &&
        mc_distribution != "empirical")
        throw ConfigError("mc.distribution must be two_point, log_normal or empirical");
    if (mc_distribution == "empirical" && empirical_csv_path.empty())
        throw ConfigError("mc.empirical_csv is required for the empirical distribution");
    if (empirical_dispersion < 0.0) throw ConfigError("mc.dispersion must be >= 0");
}

void apply_key_value(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "model.original_capital") {
        try {
            c.model.original_capital = Money::parse(value);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "model.moc") c.model.moc = parse_double(key, value);
    else if (key == "model.horizon_years") c.model.horizon_years = static_cast<int>(parse_int(key, value));
    else if (key == "model.deal_duration_years") c.model.deal_duration_years = parse_double(key, value);
    else if (key == "model.premium_rate") c.model.premium_rate = parse_double(key, value);
    else if (key == "model.equity_share") c.model.equity_share = parse_double(key, value);
    else if (key == "model.clawback_rate") c.model.clawback_rate = parse_double(key, value);
    else if (key == "model.coverage") c.model.coverage = parse_double(key, value);
    else if (key == "model.funds_cost_rate") c.model.funds_cost_rate = parse_double(key, value);
    else if (key == "model.winner_multiple") c.model.winner_multiple = parse_double(key, value);
    else if (key == "model.limited_liability") c.model.limited_liability = parse_bool(key, value);
    else if (key == "model.reserve_rule") {
        if (value == "gross_payout") c.model.reserve_rule = ReserveRule::GrossPayout;
        else if (value == "net_of_clawback") c.model.reserve_rule = ReserveRule::NetOfClawback;
        else throw ConfigError("model.reserve_rule must be gross_payout or net_of_clawback");
    }
    else if (key == "sweep.rho_min") c.rho_min = parse_double(key, value);
    else if (key == "sweep.rho_max") c.rho_max = parse_double(key, value);
    else if (key == "sweep.rho_step") c.rho_step = parse_double(key, value);
    else if (key == "anchors.bank_at_zero") c.anchor_bank_at_zero = parse_double(key, value);
    else if (key == "anchors.bank_at_zero_tol") c.anchor_bank_at_zero_tol = parse_double(key, value);
    else if (key == "anchors.gap_64") c.anchor_gap = parse_double(key, value);
    else if (key == "anchors.gap_64_tol") c.anchor_gap_tol = parse_double(key, value);
    else if (key == "anchors.rho_star_lo") c.anchor_rho_star_lo = parse_double(key, value);
    else if (key == "anchors.rho_star_hi") c.anchor_rho_star_hi = parse_double(key, value);
    else if (key == "anchors.clawback_rate") c.anchor_clawback_rate = parse_double(key, value);
    else if (key == "anchors.clawback_rate_tol") c.anchor_clawback_rate_tol = parse_double(key, value);
    else if (key == "calibrate.anchors") c.calibrate_anchors = split_list(value);
    else if (key == "calibrate.knobs") c.calibrate_knobs = split_list(value);
    else if (key == "mc.seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "mc.n_funds") c.n_funds = static_cast<int>(parse_int(key, value));
    else if (key == "mc.investments_per_fund")
        c.investments_per_fund = static_cast<int>(parse_int(key, value));
    else if (key == "mc.rho") c.mc_rho = parse_double(key, value);
    else if (key == "mc.distribution") c.mc_distribution = value;
    else if (key == "mc.lognormal_mu") c.lognormal_mu = parse_double(key, value);
    else if (key == "mc.lognormal_sigma") c.lognormal_sigma = parse_double(key, value);
    else if (key == "mc.empirical_csv") c.empirical_csv_path = value;
    else if (key == "mc.dispersion") c.empirical_dispersion = parse_double(key, value);
    else if (key == "output.path") c.out_path = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

void parse_config_text(RunConfig& config, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        apply_key_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

RunConfig load_config(const std::string& config_path, const std::vector<std::string>& overrides) {
    RunConfig config;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw IoError("cannot read config file '" + config_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        parse_config_text(config, buffer.str());
    }
    for (const auto& setting : overrides) {
        const auto eq = setting.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + setting + "'");
        apply_key_value(config, trim(setting.substr(0, eq)), trim(setting.substr(eq + 1)));
    }
    config.validate();
    return config;
}

AnchorSet anchors_from_config(const RunConfig& c) {
    return {
        {Anchor::Kind::BankAtZero, "bank_at_zero", c.anchor_bank_at_zero, c.anchor_bank_at_zero_tol},
        {Anchor::Kind::Gap64, "gap_64", c.anchor_gap, c.anchor_gap_tol},
        {Anchor::Kind::RhoStar, "rho_star", 0.5 * (c.anchor_rho_star_lo + c.anchor_rho_star_hi),
         0.5 * (c.anchor_rho_star_hi - c.anchor_rho_star_lo)},
        {Anchor::Kind::ClawbackRateReference, "clawback_rate_reference", c.anchor_clawback_rate,
         c.anchor_clawback_rate_tol},
    };
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::vector<double> rho_grid_from_config(const RunConfig& c) {
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double rho = c.rho_min + c.rho_step * i;
        if (rho > c.rho_max + 0.5 * c.rho_step) break;
        if (rho > c.rho_max) {
            grid.push_back(c.rho_max);
            break;
        }
        grid.push_back(rho);
    }
    return grid;
}

namespace {

void append_model_metadata(std::string& out, const ModelParams& m) {
    out += "# model.original_capital = " + m.original_capital.str() + "\n";
    out += "# model.moc = " + format_double(m.moc) + "\n";
    out += "# model.horizon_years = " + std::to_string(m.horizon_years) + "\n";
    out += "# model.deal_duration_years = " + format_double(m.deal_duration_years) + "\n";
    out += "# model.premium_rate = " + format_double(m.premium_rate) + "\n";
    out += "# model.equity_share = " + format_double(m.equity_share) + "\n";
    out += "# model.clawback_rate = " + format_double(m.clawback_rate) + "\n";
    out += "# model.coverage = " + format_double(m.coverage) + "\n";
    out += "# model.funds_cost_rate = " + format_double(m.funds_cost_rate) + "\n";
    out += "# model.winner_multiple = " + format_double(m.winner_multiple) + "\n";
    out += std::string("# model.limited_liability = ") +
           (m.limited_liability ? "true" : "false") + "\n";
    out += std::string("# model.reserve_rule = ") + to_string(m.reserve_rule) + "\n";
}

}  // namespace

std::string sweep_csv(const RunConfig& config) {
    config.validate();
    const auto grid = rho_grid_from_config(config);
    const auto points = sweep(config.model, grid);

    std::string out;
    append_model_metadata(out, config.model);
    out += "# normal_range = " + format_double(kNormalRangeLow) + "," +
           format_double(kNormalRangeHigh) + "\n";
    out += "# zero_invested_range = " + format_double(kZeroInvestedLow) + "," +
           format_double(kZeroInvestedHigh) + "\n";
    out += "rho,bank_baseline,bank_clawback,uw_per_dollar_baseline,uw_per_dollar_clawback,"
           "uw_invested\n";
    for (const auto& p : points) {
        out += format_double(p.baseline.rho);
        out += ',';
        out += format_double(p.baseline.bank_multiple);
        out += ',';
        out += format_double(p.clawback.bank_multiple);
        out += ',';
        out += p.baseline.uw_per_dollar_insured.str();
        out += ',';
        out += p.clawback.uw_per_dollar_insured.str();
        out += ',';
        out += p.clawback.uw_invested_funds.str();
        out += '\n';
    }
    return out;
}

std::vector<SweepPoint> parse_sweep_csv(const std::string& text) {
    std::vector<SweepPoint> points;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        std::istringstream fields(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) throw Error("sweep csv: expected 6 columns, got " + line);
        SweepPoint p;
        p.baseline.rho = parse_double("rho", cells[0]);
        p.clawback.rho = p.baseline.rho;
        p.baseline.bank_multiple = parse_double("bank_baseline", cells[1]);
        p.clawback.bank_multiple = parse_double("bank_clawback", cells[2]);
        p.baseline.uw_per_dollar_insured = Money::parse(cells[3]);
        p.clawback.uw_per_dollar_insured = Money::parse(cells[4]);
        p.clawback.uw_invested_funds = Money::parse(cells[5]);
        points.push_back(p);
    }
    return points;
}

namespace {

void append_residual(std::string& out, const AnchorResidual& r) {
    const std::string prefix = "anchor." + r.name + ".";
    out += prefix + "target = " + format_double(r.target) + "\n";
    out += prefix + "tolerance = " + format_double(r.tolerance) + "\n";
    if (r.evaluable) {
        out += prefix + "value = " + format_double(r.value) + "\n";
        out += prefix + "residual = " + format_double(r.residual) + "\n";
    } else {
        out += prefix + "value = unavailable\n";
        out += prefix + "residual = unavailable\n";
    }
    out += prefix + "within_tolerance = " + (r.within ? std::string("true") : std::string("false")) +
           "\n";
}

void append_fit(std::string& out, const std::string& section, const CalibrationReport& fit) {
    out += section + ".moc = " + format_double(fit.params.moc) + "\n";
    out += section + ".deal_duration_years = " + format_double(fit.params.deal_duration_years) + "\n";
    out += section + ".winner_multiple = " + format_double(fit.params.winner_multiple) + "\n";
    out += section + ".funds_cost_rate = " + format_double(fit.params.funds_cost_rate) + "\n";
    out += section + std::string(".reserve_rule = ") + to_string(fit.params.reserve_rule) + "\n";
    out += section + std::string(".limited_liability = ") +
           (fit.params.limited_liability ? "true" : "false") + "\n";
    out += section + ".converged = " + (fit.converged ? std::string("true") : std::string("false")) +
           "\n";
    out += section + ".iterations = " + std::to_string(fit.iterations) + "\n";
}

Knob knob_from_name(const std::string& name) {
    for (Knob k : {Knob::Moc, Knob::DealDuration, Knob::WinnerMultiple, Knob::FundsCost,
                   Knob::ReserveRuleVariant})
        if (name == to_string(k)) return k;
    throw ConfigError("unknown calibrate knob '" + name + "'");
}

}  // namespace

CalibrationRun run_calibration(const RunConfig& config) {
    config.validate();
    const AnchorSet all = anchors_from_config(config);
    CalibrationRun run;

    if (!config.calibrate_anchors.empty()) {
        // custom single-stage fit over the selected anchors and knobs
        AnchorSet selected;
        for (const auto& name : config.calibrate_anchors) {
            bool found = false;
            for (const auto& a : all)
                if (a.name == name) {
                    selected.push_back(a);
                    found = true;
                }
            if (!found) throw ConfigError("unknown calibrate anchor '" + name + "'");
        }
        std::vector<Knob> knobs;
        for (const auto& name : config.calibrate_knobs) knobs.push_back(knob_from_name(name));
        if (knobs.empty())
            knobs = {Knob::Moc, Knob::DealDuration, Knob::WinnerMultiple, Knob::FundsCost};

        const CalibrationReport fit = fit_anchors(selected, knobs, config.model);
        std::string out = "# dinsim calibration report (custom fit)\n";
        append_fit(out, "fit", fit);
        for (const auto& r : fit.residuals) append_residual(out, r);
        out += std::string("converged = ") + (fit.converged ? "true" : "false") + "\n";
        run.report_text = std::move(out);
        run.converged = fit.converged;
        return run;
    }

    const ReferenceCalibration ref = run_reference_calibration(config.model, all);
    std::string out = "# dinsim calibration report\n";
    append_fit(out, "portfolio_fit", ref.portfolio_fit);
    append_fit(out, "clawback_pricing", ref.clawback_fit);
    out += "clawback_pricing.lstar = " + format_double(ref.lstar) + "\n";
    for (const auto& r : ref.combined) append_residual(out, r);
    out += std::string("converged = ") + (ref.converged ? "true" : "false") + "\n";
    run.report_text = std::move(out);
    run.converged = ref.converged;
    return run;
}

std::string mc_csv(const RunConfig& config) {
    config.validate();

    OutcomeDistribution dist = OutcomeDistribution::two_point(1.0, 0.0);
    if (config.mc_distribution == "two_point") {
        dist = OutcomeDistribution::two_point(config.model.winner_multiple, config.mc_rho);
    } else if (config.mc_distribution == "log_normal") {
        dist = OutcomeDistribution::log_normal(config.lognormal_mu, config.lognormal_sigma);
    } else {
        std::ifstream in(config.empirical_csv_path);
        if (!in) throw IoError("cannot read empirical csv '" + config.empirical_csv_path + "'");
        dist = OutcomeDistribution::empirical_from_csv(in, config.empirical_dispersion);
    }

    SimConfig sim{config.seed, config.n_funds, config.investments_per_fund, config.model};
    const auto cohort = sample_cohort(sim, dist);

    std::string out;
    append_model_metadata(out, config.model);
    out += "# mc.seed = " + std::to_string(config.seed) + "\n";
    out += "# mc.n_funds = " + std::to_string(config.n_funds) + "\n";
    out += "# mc.investments_per_fund = " + std::to_string(config.investments_per_fund) + "\n";
    out += "# mc.distribution = " + config.mc_distribution + "\n";
    out += "# mc.rho = " + format_double(config.mc_rho) + "\n";
    out += "fund,rho,bank_baseline,bank_clawback,uw_net\n";

    std::vector<double> baseline(cohort.size()), clawback(cohort.size());
    for (std::size_t f = 0; f < cohort.size(); ++f) {
        const FundSim base = simulate_fund(cohort[f], config.model, false);
        const FundSim claw = simulate_fund(cohort[f], config.model, true);
        baseline[f] = base.bank_multiple;
        clawback[f] = claw.bank_multiple;
        out += std::to_string(f);
        out += ',';
        out += format_double(base.rho);
        out += ',';
        out += format_double(base.bank_multiple);
        out += ',';
        out += format_double(claw.bank_multiple);
        out += ',';
        out += claw.uw_net.str();
        out += '\n';
    }

    const SummaryStats b = summarize(baseline);
    const SummaryStats c = summarize(clawback);
    auto stats = [&](const char* name, const SummaryStats& s) {
        std::string block;
        const std::string prefix = std::string("# summary.") + name + ".";
        block += prefix + "mean = " + format_double(s.mean) + "\n";
        block += prefix + "q05 = " + format_double(s.q05) + "\n";
        block += prefix + "q25 = " + format_double(s.q25) + "\n";
        block += prefix + "q50 = " + format_double(s.q50) + "\n";
        block += prefix + "q75 = " + format_double(s.q75) + "\n";
        block += prefix + "q95 = " + format_double(s.q95) + "\n";
        block += prefix + "frac_past_breakeven = " + format_double(s.frac_past_breakeven) + "\n";
        return block;
    };
    out += stats("bank_baseline", b);
    out += stats("bank_clawback", c);
    return out;
}

ScenarioOutcome run_scenario(const std::string& scenario_text) {
    Ledger ledger;
    bool have_case = false;
    LienCase current{ClawbackLien(Money{}, 0.0, 1), 0, 30, 0, Money{}};
    int day = 0;

    std::istringstream in(scenario_text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string verb;
        fields >> verb;
        auto context = [&] { return "scenario line " + std::to_string(line_no) + ": "; };

        if (verb == "attach") {
            std::string amount, rate, months, window;
            fields >> amount >> rate >> months;
            if (amount.empty() || rate.empty() || months.empty())
                throw ConfigError(context() + "attach AMOUNT RATE HORIZON_MONTHS [WINDOW_DAYS]");
            int window_days = 30;
            if (fields >> window) window_days = static_cast<int>(parse_int("window", window));
            const Money payout = Money::parse(amount);
            LedgerEvent payout_event =
                make_event(day, EventTag::DinPayout,
                           {{AccountId::Underwriter, -payout}, {AccountId::Bank, payout}});
            ledger.post(payout_event);
            auto attached = attach_lien(payout_event, parse_double("rate", rate),
                                        static_cast<int>(parse_int("months", months)), window_days);
            ledger.post(attached.event);
            current = attached.lien_case;
            have_case = true;
        } else if (verb == "advance") {
            std::string days;
            fields >> days;
            if (!have_case) throw ConfigError(context() + "advance before any attach");
            auto advanced = advance_time(current, static_cast<int>(parse_int("days", days)));
            for (const auto& e : advanced.events) ledger.post(e);
            current = advanced.lien_case;
            day = current.attach_day + current.days_since_attach;
        } else if (verb == "settle-cash") {
            std::string amount;
            fields >> amount;
            if (!have_case) throw ConfigError(context() + "settle-cash before any attach");
            auto settled = settle(current, SettlementOffer::cash(Money::parse(amount)));
            ledger.post(settled.event);
            current = settled.lien_case;
        } else if (verb == "settle-equity") {
            std::string policy, allocation;
            fields >> policy >> allocation;
            if (!have_case) throw ConfigError(context() + "settle-equity before any attach");
            auto settled = settle(
                current, SettlementOffer::equity(Money::parse(policy), Money::parse(allocation)));
            ledger.post(settled.event);
            current = settled.lien_case;
        } else if (verb == "bankruptcy") {
            std::string assets;
            fields >> assets;
            if (!have_case) throw ConfigError(context() + "bankruptcy before any attach");
            if (!assets.empty()) current.firm_assets = Money::parse(assets);
            auto broke = bankruptcy(current);
            ledger.post(broke.event);
            current = broke.lien_case;
        } else {
            throw ConfigError(context() + "unknown action '" + verb + "'");
        }
    }

    ScenarioOutcome outcome;
    outcome.log_text = ledger.export_log();
    for (auto id : {AccountId::Bank, AccountId::Underwriter, AccountId::Firm,
                    AccountId::PortfolioCompanies, AccountId::ExternalSink}) {
        outcome.balances_text +=
            std::string(to_string(id)) + " = " + ledger.balance(id).str() + "\n";
    }
    return outcome;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const CaseClosed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int cmd_sweep(const RunConfig& config) {
    return guarded([&] {
        const std::string path = config.out_path.empty() ? "sweep.csv" : config.out_path;
        write_file(path, sweep_csv(config));
        std::cout << "sweep written to " << path << "\n";
        return 0;
    });
}

int cmd_calibrate(const RunConfig& config) {
    return guarded([&] {
        const CalibrationRun run = run_calibration(config);
        const std::string path = config.out_path.empty() ? "calibration.txt" : config.out_path;
        write_file(path, run.report_text);
        std::cout << "calibration report written to " << path
                  << (run.converged ? " (converged)" : " (residuals out of tolerance)") << "\n";
        return run.converged ? 0 : 1;
    });
}

int cmd_mc(const RunConfig& config) {
    return guarded([&] {
        const std::string path = config.out_path.empty() ? "mc.csv" : config.out_path;
        write_file(path, mc_csv(config));
        std::cout << "monte carlo study written to " << path << "\n";
        return 0;
    });
}

int cmd_lifecycle(const RunConfig& config, const std::string& scenario_path) {
    return guarded([&] {
        std::ifstream in(scenario_path);
        if (!in) throw IoError("cannot read scenario '" + scenario_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        const ScenarioOutcome outcome = run_scenario(buffer.str());
        const std::string path = config.out_path.empty() ? "lifecycle_log.txt" : config.out_path;
        write_file(path, outcome.log_text);
        std::cout << outcome.balances_text;
        std::cout << "ledger log written to " << path << "\n";
        return 0;
    });
}

}  // namespace dinsim::cli
