// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dinsim/calibrate.hpp"
#include "dinsim/cli.hpp"
#include "dinsim/contracts.hpp"
#include "dinsim/errors.hpp"
#include "dinsim/lifecycle.hpp"
#include "dinsim/model.hpp"
#include "dinsim/montecarlo.hpp"

using namespace dinsim;

namespace {

int failures = 0;

void report(int number, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s - %s\n", pass ? "PASS" : "FAIL", number, what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double v) { return cli::format_double(v); }

// 1. Bundled-loan toy scenario, exact.
void criterion_1() {
    const double half = bundled_loan_scenario(0.5, 0.0);
    const double all = bundled_loan_scenario(1.0, 0.0);
    report(1, half == 1.5 && all == 2.0, "bundled-loan toy scenario exact",
           "f=0.5 -> " + fmt(half) + ", f=1 -> " + fmt(all));
}

// 2. Lien schedule exact and monotone.
void criterion_2() {
    const ClawbackLien lien(Money::parse("100"), 0.623, 12);
    bool pass = lien_value(lien, 0) == Money::parse("62.3");
    for (int m = 12; m <= 24; ++m) pass = pass && lien_value(lien, m) == Money::parse("100");
    Money prev = lien_value(lien, 0);
    for (int m = 1; m <= 24; ++m) {
        const Money v = lien_value(lien, m);
        pass = pass && v >= prev;
        prev = v;
    }
    report(2, pass, "lien schedule 62.3 -> 100, monotone",
           "month 0 = " + lien_value(lien, 0).str() + ", month 12 = " + lien_value(lien, 12).str());
}

// 3. Baseline bank return strictly decreasing on the normal range.
void criterion_3() {
    ModelParams p;  // p=0.05, e=0.5, coverage=1, g=1.6 < 2
    p.clawback_rate = 0.0;
    bool strict = true;
    double prev = bank_return(p, 0.90);
    for (int i = 1; i <= 60; ++i) {
        const double cur = bank_return(p, 0.90 + 0.01 * i);
        strict = strict && cur < prev;
        prev = cur;
    }
    report(3, strict, "perverse incentive: bank return strictly decreasing on [0.9, 1.5]",
           "B(0.9) = " + fmt(bank_return(p, 0.9)) + ", B(1.5) = " + fmt(bank_return(p, 1.5)));
}

// 4. Clawback cure: monotone bank curve and a barely-positive underwriter floor.
void criterion_4() {
    ModelParams p;
    p.clawback_rate = 0.623;
    p.limited_liability = true;

    const auto points = sweep(p, default_rho_grid());
    bool monotone = points.size() == 801;
    for (std::size_t i = 1; i < points.size(); ++i)
        monotone = monotone && points[i].clawback.bank_multiple >= points[i - 1].clawback.bank_multiple;

    const Money floor = underwriter_cashflow(p, 0.0).net;
    const Money cap = insured_face(p).scaled_by(0.15);
    const bool floor_ok = floor >= Money{} && floor <= cap;
    report(4, monotone && floor_ok, "clawback cure: monotone bank curve, underwriter floor",
           "monotone across 801 points = " + std::string(monotone ? "yes" : "no") +
               ", uw net at rho 0 = " + floor.str() + " in [0, " + cap.str() + "]");
}

// 5. Anchor calibration: meet the first two anchors; rho_star in band or
//    reported as a residual (joint reproduction is not guaranteed).
void criterion_5() {
    const ReferenceCalibration ref = run_reference_calibration(ModelParams{}, default_anchors());
    const AnchorResidual* bank = nullptr;
    const AnchorResidual* gap = nullptr;
    const AnchorResidual* rho = nullptr;
    for (const auto& r : ref.combined) {
        if (r.name == "bank_at_zero") bank = &r;
        if (r.name == "gap_64") gap = &r;
        if (r.name == "rho_star") rho = &r;
    }
    bool pass = bank && gap && rho && bank->evaluable && gap->evaluable;
    pass = pass && std::abs(bank->value - 29.0) <= 0.5;
    pass = pass && std::abs(gap->value - 0.64) <= 0.05;

    const bool rho_in_band = rho && rho->evaluable && rho->value >= 2.27 && rho->value <= 2.28;
    bool all_reported = ref.combined.size() == 4;
    for (const auto& r : ref.combined) all_reported = all_reported && !r.name.empty();
    pass = pass && (rho_in_band || all_reported);

    std::string detail = "bank(0) = " + std::string(bank && bank->evaluable ? fmt(bank->value) : "?") +
                         " (29 +/- 0.5), gap = " +
                         std::string(gap && gap->evaluable ? fmt(gap->value) : "?") +
                         " (0.64 +/- 0.05), rho* = " +
                         std::string(rho && rho->evaluable ? fmt(rho->value) : "?") +
                         (rho_in_band ? " in [2.27, 2.28]" : " (residual reported; target [2.27, 2.28])");
    report(5, pass, "anchor calibration", detail);
}

// 6. Clawback-rate reproduction, or the comparative-statics signs.
void criterion_6() {
    const ReferenceCalibration ref = run_reference_calibration(ModelParams{}, default_anchors());
    const bool rate_match = std::isfinite(ref.lstar) && std::abs(ref.lstar - 0.623) <= 0.02;

    bool signs_ok = false;
    std::string signs_detail;
    try {
        const auto rows = comparative_statics(ref.clawback_fit.params);
        signs_ok = rows.size() == 2 && rows[0].direction == -1 && rows[1].direction == 1;
        signs_detail = ", statics: premium up -> L* " +
                       std::string(rows[0].direction < 0 ? "down" : "not down") +
                       ", funds cost up -> L* " +
                       std::string(rows[1].direction > 0 ? "up" : "not up");
    } catch (const Error& e) {
        signs_detail = std::string(", statics unavailable: ") + e.what();
    }
    report(6, rate_match || signs_ok, "clawback rate reproduction",
           "L* = " + fmt(ref.lstar) + " (0.623 +/- 0.02, funds cost fitted to " +
               fmt(ref.clawback_fit.params.funds_cost_rate) + ")" + signs_detail);
}

// 7. Monte Carlo agrees with the closed form; identical seeds, identical bytes.
void criterion_7() {
    const ModelParams p;
    bool within = true;
    std::string errs;
    for (double rho : {0.5, 1.0, 1.5}) {
        SimConfig config{424242, 10000, 20, p};
        const auto cohort = sample_cohort(config, OutcomeDistribution::two_point(p.winner_multiple, rho));
        double sum = 0.0;
        for (const auto& fund : cohort) sum += simulate_fund(fund, p, false).bank_multiple;
        const double mc_mean = sum / config.n_funds;
        const double closed = bank_return(p.with_clawback(0.0), rho);
        const double rel = std::abs(mc_mean / closed - 1.0);
        within = within && rel < 0.01;
        errs += " rho " + fmt(rho) + ": " + fmt(rel * 100.0) + "%";
    }

    cli::RunConfig config;
    config.n_funds = 10000;
    config.investments_per_fund = 20;
    config.seed = 424242;
    const std::string csv_a = cli::mc_csv(config);
    const std::string csv_b = cli::mc_csv(config);
    const bool bytes_equal = csv_a == csv_b && !csv_a.empty();

    report(7, within && bytes_equal, "Monte Carlo vs closed form (10^4 funds)",
           "relative errors:" + errs + "; rerun byte-identical = " +
               (bytes_equal ? std::string("yes") : std::string("no")));
}

// 8. Ledger conservation over randomized lifecycle scenarios.
void criterion_8() {
    bool pass = true;
    for (std::uint64_t scenario = 0; scenario < 1000; ++scenario) {
        auto u = [&](std::uint64_t step, std::uint64_t draw) {
            return rng::uniform(0xacce97ULL, scenario, step, draw);
        };
        Ledger ledger;
        const Money payout = Money::from_double(u(0, 0) * 1000.0);
        const LedgerEvent payout_event =
            make_event(0, EventTag::DinPayout,
                       {{AccountId::Underwriter, -payout}, {AccountId::Bank, payout}});
        ledger.post(payout_event);
        auto attached = attach_lien(payout_event, u(0, 1), 1 + static_cast<int>(u(0, 2) * 35.0));
        ledger.post(attached.event);
        LienCase c = attached.lien_case;

        const int hops = 1 + static_cast<int>(u(0, 3) * 5.0);
        for (int hop = 0; hop < hops; ++hop) {
            auto advanced = advance_time(c, static_cast<int>(u(hop + 1, 0) * 120.0));
            for (const auto& e : advanced.events) ledger.post(e);
            c = advanced.lien_case;
        }

        Money recovered;
        const double action = u(50, 0);
        if (action < 0.4) {
            auto settled =
                settle(c, SettlementOffer::cash(c.accrued_value() +
                                                Money::from_double(u(50, 1) * 20.0)));
            ledger.post(settled.event);
            recovered = settled.event.credited_amount();
        } else if (action < 0.7) {
            auto settled = settle(c, SettlementOffer::equity(c.lien.payment_value.scaled_by(u(50, 1)),
                                                             Money::parse("750")));
            ledger.post(settled.event);
            recovered = settled.event.credited_amount();
        } else {
            c.firm_assets = Money::from_double(u(50, 1) * 1500.0);
            auto broke = bankruptcy(c);
            ledger.post(broke.event);
            recovered = broke.recovered;
        }

        pass = pass && ledger.total() == Money{} && recovered <= c.lien.payment_value;
    }
    report(8, pass, "ledger conservation over 1000 randomized scenarios",
           pass ? "all zero-sum, recovery never exceeded the payout" : "violation found");
}

// 9. MOC hard bound.
void criterion_9() {
    auto rejected = [](double moc) {
        ModelParams p;
        p.moc = moc;
        try {
            insured_face(p);
            return false;
        } catch (const MocOutOfRange&) {
            return true;
        }
    };
    const bool pass = rejected(1.9) && rejected(47.1) && !rejected(2.0) && !rejected(47.0);
    report(9, pass, "MOC bound [2, 47] enforced", "1.9 and 47.1 rejected; 2 and 47 accepted");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
