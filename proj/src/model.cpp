#include "dinsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dinsim/errors.hpp"
#include "dinsim/parallel.hpp"

namespace dinsim {

const char* to_string(ReserveRule rule) {
    return rule == ReserveRule::GrossPayout ? "gross_payout" : "net_of_clawback";
}

void ModelParams::validate() const {
    if (!(original_capital > Money{})) throw InvalidParams("original_capital must be > 0");
    if (moc < 2.0 || moc > 47.0)
        throw MocOutOfRange("moc " + std::to_string(moc) + " outside [2, 47]");
    if (horizon_years < 1) throw InvalidParams("horizon_years must be >= 1");
    if (!(deal_duration_years > 0.0) || deal_duration_years > static_cast<double>(horizon_years))
        throw InvalidParams("deal_duration_years must be in (0, horizon_years]");
    if (premium_rate < 0.0 || premium_rate > 1.0) throw InvalidParams("premium_rate outside [0, 1]");
    if (equity_share < 0.0 || equity_share > 1.0) throw InvalidParams("equity_share outside [0, 1]");
    if (clawback_rate < 0.0 || clawback_rate > 1.0) throw InvalidParams("clawback_rate outside [0, 1]");
    if (!(coverage > 0.0) || coverage > 1.0) throw InvalidParams("coverage outside (0, 1]");
    if (funds_cost_rate < 0.0) throw InvalidParams("funds_cost_rate must be >= 0");
    if (!(winner_multiple > 0.0)) throw InvalidParams("winner_multiple must be > 0");
}

OutcomeTemplate OutcomeTemplate::two_point(double winner_multiple) {
    if (!(winner_multiple > 0.0)) throw InvalidParams("TwoPoint winner multiple must be > 0");
    OutcomeTemplate t;
    t.kind = Kind::TwoPoint;
    t.winner_multiple = winner_multiple;
    return t;
}

OutcomeTemplate OutcomeTemplate::empirical(std::vector<std::pair<double, double>> outcomes) {
    if (outcomes.empty()) throw InvalidParams("empirical template needs at least one outcome");
    double total = 0.0;
    double mean = 0.0;
    for (auto& [m, w] : outcomes) {
        if (m < 0.0 || w < 0.0 || !std::isfinite(m) || !std::isfinite(w))
            throw InvalidParams("empirical template outcomes must be finite and non-negative");
        total += w;
        mean += m * w;
    }
    if (!(total > 0.0)) throw InvalidParams("empirical template weights must not all be zero");
    OutcomeTemplate t;
    t.kind = Kind::Empirical;
    t.outcomes = std::move(outcomes);
    for (auto& [m, w] : t.outcomes) w /= total;
    return t;
}

std::vector<std::pair<double, double>> OutcomeTemplate::weights_at(double rho) const {
    if (rho < 0.0) throw InvalidParams("rho must be >= 0");
    if (kind == Kind::TwoPoint) {
        const double g = winner_multiple;
        if (rho >= g) return {{rho, 1.0}};
        const double failure = 1.0 - rho / g;
        return {{0.0, failure}, {g, 1.0 - failure}};
    }
    double mean = 0.0;
    for (const auto& [m, w] : outcomes) mean += m * w;
    if (rho == 0.0) {
        // total loss: every outcome collapses to zero
        return {{0.0, 1.0}};
    }
    if (!(mean > 0.0)) throw InvalidParams("empirical template has zero mean, cannot scale to rho > 0");
    std::vector<std::pair<double, double>> scaled = outcomes;
    const double factor = rho / mean;
    for (auto& [m, w] : scaled) m *= factor;
    return scaled;
}

namespace {

// Per-unit-of-face flow decomposition at aggregate return rho.
struct FaceFlows {
    double premiums;           // p * D * coverage
    double defaulted_weight;   // share of face in default
    double payouts;            // coverage * defaulted weight
    double uw_equity_share;    // e * survivor value
    double bank_equity_keep;   // (1 - e) * survivor value
    double defaulted_assets;   // value transferred to the underwriter on default
    double bank_gross;         // bank position before any lien recovery
};

FaceFlows face_flows(const ModelParams& params, double rho, const OutcomeTemplate& tmpl) {
    const auto outcomes = tmpl.weights_at(rho);
    double defaulted = 0.0, survivor_value = 0.0, defaulted_assets = 0.0;
    for (const auto& [multiple, weight] : outcomes) {
        if (multiple < 1.0) {  // exit below face: DIN claim; exact-face exits survive
            defaulted += weight;
            defaulted_assets += weight * multiple;
        } else {
            survivor_value += weight * multiple;
        }
    }
    FaceFlows f{};
    f.premiums = params.premium_rate * params.deal_duration_years * params.coverage;
    f.defaulted_weight = defaulted;
    f.payouts = params.coverage * defaulted;
    f.uw_equity_share = params.equity_share * survivor_value;
    f.bank_equity_keep = (1.0 - params.equity_share) * survivor_value;
    f.defaulted_assets = defaulted_assets;
    f.bank_gross = f.payouts + f.bank_equity_keep - f.premiums;
    return f;
}

// Lien recovery per unit face: the full demand L * payouts, capped at the
// bank's positive pre-lien position under limited liability.
double recovery_per_face(const ModelParams& params, const FaceFlows& f) {
    const double demand = params.clawback_rate * f.payouts;
    if (!params.limited_liability) return demand;
    return std::min(demand, std::max(0.0, f.bank_gross));
}

double invested_per_face(const ModelParams& params, const FaceFlows& f) {
    double reserve = f.payouts;
    if (params.reserve_rule == ReserveRule::NetOfClawback)
        reserve *= 1.0 - params.clawback_rate;
    return std::max(0.0, reserve - f.premiums);
}

CurvePoint make_point(const ModelParams& params, double rho, const OutcomeTemplate& tmpl,
                      double face) {
    const FaceFlows f = face_flows(params, rho, tmpl);
    const double recovery = recovery_per_face(params, f);
    const double invested = invested_per_face(params, f);
    const double carry = params.funds_cost_rate * invested * params.deal_duration_years;
    const double net =
        f.premiums + f.uw_equity_share + recovery + f.defaulted_assets - f.payouts - carry;

    CurvePoint pt;
    pt.rho = rho;
    pt.bank_multiple = params.moc * (f.bank_gross - recovery);
    pt.uw_per_dollar_insured = Money::from_double(net);
    pt.uw_invested_funds = Money::from_double(invested * face);
    if (invested > 0.0) pt.uw_return_on_invested = net / invested;
    return pt;
}

}  // namespace

Money insured_face(const ModelParams& params) {
    params.validate();
    return params.original_capital.scaled_by(params.moc);
}

double bank_return(const ModelParams& params, double rho) {
    return bank_return(params, rho, OutcomeTemplate::two_point(params.winner_multiple));
}

double bank_return(const ModelParams& params, double rho, const OutcomeTemplate& tmpl) {
    params.validate();
    const FaceFlows f = face_flows(params, rho, tmpl);
    return params.moc * (f.bank_gross - recovery_per_face(params, f));
}

UnderwriterCashflow underwriter_cashflow(const ModelParams& params, double rho) {
    return underwriter_cashflow(params, rho, OutcomeTemplate::two_point(params.winner_multiple));
}

UnderwriterCashflow underwriter_cashflow(const ModelParams& params, double rho,
                                         const OutcomeTemplate& tmpl) {
    params.validate();
    const double face = insured_face(params).to_double();
    const FaceFlows f = face_flows(params, rho, tmpl);
    const double recovery = recovery_per_face(params, f);
    const double invested = invested_per_face(params, f);
    const double carry = params.funds_cost_rate * invested * params.deal_duration_years;
    const double net =
        f.premiums + f.uw_equity_share + recovery + f.defaulted_assets - f.payouts - carry;

    UnderwriterCashflow flow;
    flow.net = Money::from_double(net * face);
    flow.invested_funds = Money::from_double(invested * face);
    flow.per_dollar = Money::from_double(net);
    if (invested > 0.0) flow.return_on_invested = net / invested;
    return flow;
}

double perverse_incentive_gap(const ModelParams& params) {
    params.validate();
    const ModelParams baseline = params.with_clawback(0.0);
    const double at_zero = bank_return(baseline, 0.0);
    const double at_top = bank_return(baseline, kRhoTop);
    if (!(at_top > 0.0))
        throw NonPositiveDenominator("perverse_incentive_gap: bank return at rho_top is " +
                                     std::to_string(at_top));
    return at_zero / at_top - 1.0;
}

std::vector<SweepPoint> sweep(const ModelParams& params, const std::vector<double>& rho_grid) {
    return sweep(params, rho_grid, OutcomeTemplate::two_point(params.winner_multiple));
}

std::vector<SweepPoint> sweep(const ModelParams& params, const std::vector<double>& rho_grid,
                              const OutcomeTemplate& tmpl) {
    params.validate();
    for (std::size_t i = 0; i < rho_grid.size(); ++i) {
        if (rho_grid[i] < 0.0) throw InvalidParams("sweep: rho grid values must be >= 0");
        if (i > 0 && rho_grid[i] < rho_grid[i - 1]) throw InvalidParams("sweep: rho grid must be sorted");
    }
    const double face = insured_face(params).to_double();
    const ModelParams baseline = params.with_clawback(0.0);

    std::vector<SweepPoint> points(rho_grid.size());
    parallel_for_indexed(rho_grid.size(), [&](std::size_t i) {
        points[i].baseline = make_point(baseline, rho_grid[i], tmpl, face);
        points[i].clawback = make_point(params, rho_grid[i], tmpl, face);
    });
    return points;
}

std::vector<double> default_rho_grid() {
    std::vector<double> grid(801);
    for (int i = 0; i <= 800; ++i) grid[static_cast<std::size_t>(i)] = i / 100.0;
    return grid;
}

double underwriter_net_per_face(const ModelParams& params, double rho) {
    params.validate();
    const OutcomeTemplate tmpl = OutcomeTemplate::two_point(params.winner_multiple);
    const FaceFlows f = face_flows(params, rho, tmpl);
    const double recovery = recovery_per_face(params, f);
    const double invested = invested_per_face(params, f);
    const double carry = params.funds_cost_rate * invested * params.deal_duration_years;
    return f.premiums + f.uw_equity_share + recovery + f.defaulted_assets - f.payouts - carry;
}

double invested_funds_per_face(const ModelParams& params, double rho) {
    params.validate();
    const OutcomeTemplate tmpl = OutcomeTemplate::two_point(params.winner_multiple);
    return invested_per_face(params, face_flows(params, rho, tmpl));
}

}  // namespace dinsim
