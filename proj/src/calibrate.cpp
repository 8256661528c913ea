#include "dinsim/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dinsim/errors.hpp"

namespace dinsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct KnobBounds {
    double lo;
    double hi;
    bool categorical;  // reserve rule: 0 = gross, 1 = net-of-clawback
};

KnobBounds bounds_for(Knob knob, const ModelParams& start) {
    switch (knob) {
        case Knob::Moc: return {30.0, 43.0, false};  // modeling range; hard bound stays [2, 47]
        case Knob::DealDuration:
            return {0.5, static_cast<double>(start.horizon_years), false};
        case Knob::WinnerMultiple: return {1.05, 3.0, false};
        case Knob::FundsCost: return {0.0, 0.25, false};
        case Knob::ReserveRuleVariant: return {0.0, 1.0, true};
    }
    throw InfeasibleBounds("unknown knob");
}

ModelParams with_knob(ModelParams params, Knob knob, double value) {
    switch (knob) {
        case Knob::Moc: params.moc = value; break;
        case Knob::DealDuration: params.deal_duration_years = value; break;
        case Knob::WinnerMultiple: params.winner_multiple = value; break;
        case Knob::FundsCost: params.funds_cost_rate = value; break;
        case Knob::ReserveRuleVariant:
            params.reserve_rule = value < 0.5 ? ReserveRule::GrossPayout : ReserveRule::NetOfClawback;
            break;
    }
    return params;
}

double anchor_value(const Anchor& anchor, const ModelParams& params) {
    switch (anchor.kind) {
        case Anchor::Kind::BankAtZero: return bank_return(params.with_clawback(0.0), 0.0);
        case Anchor::Kind::Gap64: return perverse_incentive_gap(params);
        case Anchor::Kind::RhoStar: return find_rho_star(params);
        case Anchor::Kind::ClawbackRateReference: return solve_clawback_rate(params);
    }
    throw Error("unknown anchor kind");
}

AnchorResidual evaluate_anchor(const Anchor& anchor, const ModelParams& params) {
    AnchorResidual r;
    r.name = anchor.name;
    r.target = anchor.target;
    r.tolerance = anchor.tolerance;
    try {
        r.value = anchor_value(anchor, params);
        r.residual = (r.value - anchor.target) / anchor.tolerance;
        r.evaluable = true;
        r.within = std::abs(r.residual) <= 1.0;
    } catch (const Error&) {
        r.residual = kInf;
    }
    return r;
}

double max_abs_residual(const std::vector<AnchorResidual>& residuals) {
    double worst = 0.0;
    for (const auto& r : residuals)
        worst = std::max(worst, r.evaluable ? std::abs(r.residual) : kInf);
    return worst;
}

}  // namespace

AnchorSet default_anchors() {
    return {
        {Anchor::Kind::BankAtZero, "bank_at_zero", 29.0, 0.5},
        {Anchor::Kind::Gap64, "gap_64", 0.64, 0.05},
        {Anchor::Kind::RhoStar, "rho_star", 2.275, 0.005},
        {Anchor::Kind::ClawbackRateReference, "clawback_rate_reference", 0.623, 0.02},
    };
}

const char* to_string(Knob knob) {
    switch (knob) {
        case Knob::Moc: return "moc";
        case Knob::DealDuration: return "deal_duration_years";
        case Knob::WinnerMultiple: return "winner_multiple";
        case Knob::FundsCost: return "funds_cost_rate";
        case Knob::ReserveRuleVariant: return "reserve_rule";
    }
    return "?";
}

double solve_clawback_root(const std::function<double(double)>& net_of_rate, double epsilon) {
    if (epsilon < 0.0) throw InvalidParams("solve_clawback: epsilon must be >= 0");

    // Bracketing needs a monotone net; sample a coarse pattern first.
    double prev = net_of_rate(0.0);
    for (int i = 1; i <= 4; ++i) {
        const double cur = net_of_rate(0.25 * i);
        if (cur < prev - 1e-12)
            throw NotMonotone("solve_clawback: net decreases between L = " +
                              std::to_string(0.25 * (i - 1)) + " and L = " + std::to_string(0.25 * i));
        prev = cur;
    }

    if (net_of_rate(0.0) >= epsilon) return 0.0;
    if (net_of_rate(1.0) < epsilon)
        throw NotBracketed("solve_clawback: net at L = 1 is " + std::to_string(net_of_rate(1.0)) +
                           ", below epsilon " + std::to_string(epsilon));

    double lo = 0.0, hi = 1.0;  // net(lo) < epsilon <= net(hi)
    while (hi - lo >= 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (net_of_rate(mid) >= epsilon)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double solve_clawback_rate(const ModelParams& params, Money epsilon) {
    params.validate();
    const double face = insured_face(params).to_double();
    return solve_clawback_root(
        [&](double rate) { return underwriter_net_per_face(params.with_clawback(rate), 0.0) * face; },
        epsilon.to_double());
}

double find_zero_crossing(const std::function<double(double)>& fn, double lo, double hi,
                          double step) {
    if (!(step > 0.0) || hi < lo) throw InvalidParams("find_zero_crossing: bad grid");

    double prev_x = lo;
    double prev_v = fn(lo);
    if (prev_v <= 0.0) return lo;
    for (double x = lo + step; x <= hi + 0.5 * step; x += step) {
        const double v = fn(std::min(x, hi));
        if (v > prev_v + 1e-9)
            throw NotMonotone("find_zero_crossing: function increases near x = " + std::to_string(x));
        if (v <= 0.0) {
            double a = prev_x, b = std::min(x, hi);  // fn(a) > 0 >= fn(b)
            while (b - a >= 1e-4) {
                const double mid = 0.5 * (a + b);
                if (fn(mid) <= 0.0)
                    b = mid;
                else
                    a = mid;
            }
            return b;
        }
        prev_x = std::min(x, hi);
        prev_v = v;
    }
    throw NoCrossing("find_zero_crossing: function positive across the whole grid");
}

double find_rho_star(const ModelParams& params) {
    params.validate();
    const ModelParams baseline = params.with_clawback(0.0);
    return find_zero_crossing([&](double rho) { return invested_funds_per_face(baseline, rho); },
                              0.0, 8.0, 0.01);
}

CalibrationReport fit_anchors(const AnchorSet& anchors, const std::vector<Knob>& free_knobs,
                              const ModelParams& start) {
    if (anchors.empty()) throw InvalidParams("fit_anchors: anchor set is empty");
    if (free_knobs.empty()) throw InfeasibleBounds("fit_anchors: no free knobs");
    for (const auto& a : anchors)
        if (!(a.tolerance > 0.0)) throw InvalidParams("fit_anchors: tolerance must be > 0");
    start.validate();

    auto residuals_at = [&](const ModelParams& p) {
        std::vector<AnchorResidual> rs;
        rs.reserve(anchors.size());
        for (const auto& a : anchors) rs.push_back(evaluate_anchor(a, p));
        return rs;
    };

    // Nothing to refine when the starting point already satisfies every anchor.
    {
        auto rs = residuals_at(start);
        if (max_abs_residual(rs) <= 1.0)
            return CalibrationReport{start, std::move(rs), true, 0};
    }

    std::vector<KnobBounds> bounds;
    bounds.reserve(free_knobs.size());
    for (Knob k : free_knobs) {
        KnobBounds b = bounds_for(k, start);
        if (!(b.hi >= b.lo)) throw InfeasibleBounds("fit_anchors: empty bounds for knob");
        bounds.push_back(b);
    }

    int evaluations = 0;
    auto objective = [&](const std::vector<double>& point) {
        ModelParams p = start;
        for (std::size_t i = 0; i < free_knobs.size(); ++i)
            p = with_knob(p, free_knobs[i], point[i]);
        ++evaluations;
        try {
            p.validate();
        } catch (const Error&) {
            return kInf;
        }
        return max_abs_residual(residuals_at(p));
    };

    // Stage 1: full grid, lexicographic enumeration in declared knob order.
    constexpr int kGridPointsPerKnob = 9;
    std::vector<std::vector<double>> grids;
    for (const auto& b : bounds) {
        std::vector<double> g;
        if (b.categorical) {
            g = {0.0, 1.0};
        } else if (b.hi == b.lo) {
            g = {b.lo};
        } else {
            for (int i = 0; i < kGridPointsPerKnob; ++i)
                g.push_back(b.lo + (b.hi - b.lo) * i / (kGridPointsPerKnob - 1));
        }
        grids.push_back(std::move(g));
    }

    std::vector<double> best(free_knobs.size());
    double best_value = kInf;
    std::vector<std::size_t> idx(free_knobs.size(), 0);
    for (bool done = false; !done;) {
        std::vector<double> point(free_knobs.size());
        for (std::size_t i = 0; i < idx.size(); ++i) point[i] = grids[i][idx[i]];
        const double value = objective(point);
        if (value < best_value) {
            best_value = value;
            best = point;
        }
        std::size_t i = idx.size();
        while (i > 0) {
            --i;
            if (++idx[i] < grids[i].size()) break;
            idx[i] = 0;
            if (i == 0) done = true;
        }
    }

    // Stage 2: coordinate bisection (golden section per knob, in order).
    constexpr double kGolden = 0.6180339887498949;
    for (int round = 0; round < 6; ++round) {
        const double before = best_value;
        for (std::size_t i = 0; i < free_knobs.size(); ++i) {
            const auto& b = bounds[i];
            if (b.categorical) {
                for (double candidate : {0.0, 1.0}) {
                    std::vector<double> point = best;
                    point[i] = candidate;
                    const double value = objective(point);
                    if (value < best_value) {
                        best_value = value;
                        best = point;
                    }
                }
                continue;
            }
            double lo = b.lo, hi = b.hi;
            auto slice = [&](double x) {
                std::vector<double> point = best;
                point[i] = x;
                return objective(point);
            };
            double x1 = hi - kGolden * (hi - lo);
            double x2 = lo + kGolden * (hi - lo);
            double f1 = slice(x1), f2 = slice(x2);
            for (int it = 0; it < 48 && hi - lo > 1e-10; ++it) {
                if (f1 <= f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - kGolden * (hi - lo);
                    f1 = slice(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + kGolden * (hi - lo);
                    f2 = slice(x2);
                }
            }
            const double candidate = f1 <= f2 ? x1 : x2;
            const double value = std::min(f1, f2);
            if (value < best_value) {
                best_value = value;
                best[i] = candidate;
            }
        }
        if (best_value >= before - 1e-12) break;
    }

    ModelParams fitted = start;
    for (std::size_t i = 0; i < free_knobs.size(); ++i)
        fitted = with_knob(fitted, free_knobs[i], best[i]);
    auto rs = residuals_at(fitted);
    const bool converged = max_abs_residual(rs) <= 1.0;
    return CalibrationReport{fitted, std::move(rs), converged, evaluations};
}

std::vector<StaticsRow> comparative_statics(const ModelParams& params) {
    params.validate();
    const double base = solve_clawback_rate(params);

    std::vector<StaticsRow> rows;
    auto probe = [&](const char* name, auto setter, double knob) {
        ModelParams up = params, down = params;
        setter(up, knob * 1.1);
        setter(down, knob * 0.9);
        StaticsRow row;
        row.knob = name;
        row.lstar_base = base;
        row.lstar_up = solve_clawback_rate(up);
        row.lstar_down = solve_clawback_rate(down);
        const double delta = row.lstar_up - base;
        row.direction = delta > 1e-9 ? 1 : delta < -1e-9 ? -1 : 0;
        rows.push_back(row);
    };
    probe("premium_rate", [](ModelParams& p, double v) { p.premium_rate = v; }, params.premium_rate);
    probe("funds_cost_rate", [](ModelParams& p, double v) { p.funds_cost_rate = v; },
          params.funds_cost_rate);
    return rows;
}

ModelParams pricing_regime(const ModelParams& base) {
    ModelParams p = base;
    p.deal_duration_years = static_cast<double>(base.horizon_years);
    p.limited_liability = false;  // the lien is priced at its face demand
    p.reserve_rule = ReserveRule::GrossPayout;
    return p;
}

ReferenceCalibration run_reference_calibration(const ModelParams& start, const AnchorSet& anchors) {
    ReferenceCalibration out;

    AnchorSet portfolio, clawback, rho;
    for (const auto& a : anchors) {
        switch (a.kind) {
            case Anchor::Kind::BankAtZero:
            case Anchor::Kind::Gap64: portfolio.push_back(a); break;
            case Anchor::Kind::ClawbackRateReference: clawback.push_back(a); break;
            case Anchor::Kind::RhoStar: rho.push_back(a); break;
        }
    }

    if (!portfolio.empty()) {
        out.portfolio_fit =
            fit_anchors(portfolio, {Knob::Moc, Knob::DealDuration, Knob::WinnerMultiple}, start);
    } else {
        out.portfolio_fit = CalibrationReport{start, {}, true, 0};
    }
    const ModelParams& k0 = out.portfolio_fit.params;

    if (!clawback.empty()) {
        out.clawback_fit = fit_anchors(clawback, {Knob::FundsCost}, pricing_regime(start));
        try {
            out.lstar = solve_clawback_rate(out.clawback_fit.params);
        } catch (const Error&) {
            out.lstar = std::numeric_limits<double>::quiet_NaN();
        }
    } else {
        out.clawback_fit = CalibrationReport{pricing_regime(start), {}, true, 0};
    }

    for (const auto& a : anchors) {
        const ModelParams& at =
            a.kind == Anchor::Kind::ClawbackRateReference ? out.clawback_fit.params : k0;
        out.combined.push_back(evaluate_anchor(a, at));
    }
    out.converged = true;
    for (const auto& r : out.combined)
        if (!r.within) out.converged = false;
    return out;
}

}  // namespace dinsim
