#include "dinsim/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>

#include "dinsim/errors.hpp"
#include "dinsim/lifecycle.hpp"

namespace dinsim {

namespace rng {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t keyed(std::uint64_t seed, std::uint64_t fund, std::uint64_t investment,
                    std::uint64_t draw) {
    std::uint64_t h = mix(seed);
    h = mix(h ^ fund);
    h = mix(h ^ investment);
    return mix(h ^ draw);
}

double uniform(std::uint64_t seed, std::uint64_t fund, std::uint64_t investment,
               std::uint64_t draw) {
    return static_cast<double>(keyed(seed, fund, investment, draw) >> 11) * 0x1.0p-53;
}

double normal(std::uint64_t seed, std::uint64_t fund, std::uint64_t investment,
              std::uint64_t draw_pair) {
    // Box-Muller; u1 nudged away from 0 so the log stays finite.
    const double u1 = uniform(seed, fund, investment, 2 * draw_pair) + 0x1.0p-54;
    const double u2 = uniform(seed, fund, investment, 2 * draw_pair + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rng

OutcomeDistribution OutcomeDistribution::two_point(double winner_multiple, double rho) {
    if (!(winner_multiple > 0.0)) throw BadDistribution("two_point: winner multiple must be > 0");
    if (rho < 0.0) throw BadDistribution("two_point: rho must be >= 0");
    OutcomeDistribution d;
    d.kind = Kind::TwoPoint;
    d.winner_multiple = winner_multiple;
    d.rho = rho;
    return d;
}

OutcomeDistribution OutcomeDistribution::log_normal(double mu, double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(mu) || !std::isfinite(sigma))
        throw BadDistribution("log_normal: bad parameters");
    OutcomeDistribution d;
    d.kind = Kind::LogNormal;
    d.mu = mu;
    d.sigma = sigma;
    return d;
}

OutcomeDistribution OutcomeDistribution::empirical(
    std::vector<std::pair<double, double>> fund_multiples, double dispersion) {
    if (fund_multiples.empty()) throw BadDistribution("empirical: no fund multiples");
    if (!(dispersion >= 0.0)) throw BadDistribution("empirical: dispersion must be >= 0");
    double total = 0.0;
    for (const auto& [m, w] : fund_multiples) {
        if (!std::isfinite(m) || !std::isfinite(w) || m < 0.0 || w < 0.0)
            throw BadDistribution("empirical: multiples and weights must be finite and >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw BadDistribution("empirical: weights sum to zero");
    OutcomeDistribution d;
    d.kind = Kind::EmpiricalCsv;
    d.fund_multiples = std::move(fund_multiples);
    d.dispersion = dispersion;
    return d;
}

OutcomeDistribution OutcomeDistribution::empirical_from_csv(std::istream& in, double dispersion) {
    std::string line;
    if (!std::getline(in, line)) throw BadDistribution("empirical csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool has_weight;
    if (line == "multiple,weight")
        has_weight = true;
    else if (line == "multiple")
        has_weight = false;
    else
        throw BadDistribution("empirical csv: expected header 'multiple,weight', got '" + line + "'");

    auto parse_cell = [](const std::string& cell, const char* what) {
        double out = 0.0;
        const char* last = cell.data() + cell.size();
        auto [ptr, ec] = std::from_chars(cell.data(), last, out);
        if (ec != std::errc{} || ptr != last)
            throw BadDistribution(std::string("empirical csv: bad ") + what + " '" + cell + "'");
        return out;
    };

    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell;
        if (!std::getline(fields, cell, ',')) throw BadDistribution("empirical csv: bad row");
        const double multiple = parse_cell(cell, "multiple");
        double weight = 1.0;
        if (has_weight && std::getline(fields, cell, ',')) weight = parse_cell(cell, "weight");
        rows.emplace_back(multiple, weight);
    }
    return empirical(std::move(rows), dispersion);
}

double OutcomeDistribution::mean() const {
    switch (kind) {
        case Kind::TwoPoint: return rho;
        case Kind::LogNormal: return std::exp(mu + 0.5 * sigma * sigma);
        case Kind::EmpiricalCsv: {
            double total = 0.0, sum = 0.0;
            for (const auto& [m, w] : fund_multiples) {
                total += w;
                sum += m * w;
            }
            return sum / total;
        }
    }
    return 0.0;
}

void SimConfig::validate() const {
    if (n_funds < 1) throw InvalidParams("SimConfig: n_funds must be >= 1");
    if (investments_per_fund < 1) throw InvalidParams("SimConfig: investments_per_fund must be >= 1");
    params.validate();
}

namespace {

constexpr std::uint64_t kFundLevelDraw = ~0ULL;  // sentinel investment index

double pick_fund_multiple(const OutcomeDistribution& dist, std::uint64_t seed, std::uint64_t fund) {
    double total = 0.0;
    for (const auto& [m, w] : dist.fund_multiples) total += w;
    double ticket = rng::uniform(seed, fund, kFundLevelDraw, 0) * total;
    for (const auto& [m, w] : dist.fund_multiples) {
        ticket -= w;
        if (ticket < 0.0) return m;
    }
    return dist.fund_multiples.back().first;
}

double sample_multiple(const OutcomeDistribution& dist, std::uint64_t seed, std::uint64_t fund,
                       std::uint64_t investment, double fund_mean) {
    switch (dist.kind) {
        case OutcomeDistribution::Kind::TwoPoint: {
            const double g = dist.winner_multiple;
            if (dist.rho >= g) return dist.rho;  // degenerate all-winner cohort
            const double failure = 1.0 - dist.rho / g;
            return rng::uniform(seed, fund, investment, 0) < failure ? 0.0 : g;
        }
        case OutcomeDistribution::Kind::LogNormal:
            return std::exp(dist.mu + dist.sigma * rng::normal(seed, fund, investment, 0));
        case OutcomeDistribution::Kind::EmpiricalCsv: {
            const double s = dist.dispersion;
            if (s == 0.0) return fund_mean;
            // mean-preserving lognormal spread around the fund's multiple
            return fund_mean * std::exp(s * rng::normal(seed, fund, investment, 0) - 0.5 * s * s);
        }
    }
    throw BadDistribution("sample_multiple: unknown distribution kind");
}

}  // namespace

std::vector<std::vector<double>> sample_cohort(const SimConfig& config,
                                               const OutcomeDistribution& dist) {
    config.validate();
    std::vector<std::vector<double>> cohort(static_cast<std::size_t>(config.n_funds));
    for (std::size_t f = 0; f < cohort.size(); ++f) {
        const double fund_mean = dist.kind == OutcomeDistribution::Kind::EmpiricalCsv
                                     ? pick_fund_multiple(dist, config.seed, f)
                                     : 0.0;
        auto& fund = cohort[f];
        fund.resize(static_cast<std::size_t>(config.investments_per_fund));
        for (std::size_t j = 0; j < fund.size(); ++j)
            fund[j] = sample_multiple(dist, config.seed, f, j, fund_mean);
    }
    return cohort;
}

FundSim simulate_fund(const std::vector<double>& multiples, const ModelParams& params,
                      bool with_clawback) {
    params.validate();
    if (multiples.empty()) throw EmptyInput("simulate_fund: no investments");
    for (double m : multiples)
        if (!(m >= 0.0)) throw InvalidParams("simulate_fund: multiples must be >= 0");

    const int n = static_cast<int>(multiples.size());
    const Money fund_face = insured_face(params);
    const Money face_each = Money::from_double(fund_face.to_double() / n);
    const DinContract contract(face_each, params.premium_rate, params.equity_share,
                               params.coverage, params.horizon_years);
    const double duration = params.deal_duration_years;
    const int closeout_day = static_cast<int>(std::llround(360.0 * duration));

    FundSim sim;
    Ledger& ledger = sim.ledger;

    // Premiums: one posting per whole contract year plus a fractional stub,
    // per insured investment, bank -> underwriter.
    const Money annual = annual_premium(contract);
    const int whole_years = static_cast<int>(duration);
    const double stub_fraction = duration - whole_years;
    for (int year = 1; year <= whole_years; ++year) {
        if (annual.is_zero()) break;
        ledger.post(make_event(360 * year, EventTag::PremiumPaid,
                               {{AccountId::Bank, -(annual * n)},
                                {AccountId::Underwriter, annual * n}}));
    }
    if (stub_fraction > 0.0 && !annual.is_zero()) {
        const Money stub = (annual * n).scaled_by(stub_fraction);
        ledger.post(make_event(closeout_day, EventTag::PremiumPaid,
                               {{AccountId::Bank, -stub}, {AccountId::Underwriter, stub}}));
    }

    // Closeout: payout + asset transfer on defaults, equity split on survivors.
    std::vector<LedgerEvent> payout_events;
    double rho_sum = 0.0;
    for (double m : multiples) {
        rho_sum += m;
        const Money exit_value = face_each.scaled_by(m);
        if (exit_value < face_each) {
            const DinPayout payout = din_payout(contract, exit_value);
            LedgerEvent event =
                make_event(closeout_day, EventTag::DinPayout,
                           {{AccountId::Underwriter, -payout.insured_receives},
                            {AccountId::Bank, payout.insured_receives}});
            ledger.post(event);
            payout_events.push_back(event);
            if (!payout.underwriter_receives_asset.is_zero())
                ledger.post(make_event(closeout_day, EventTag::AssetTransfer,
                                       {{AccountId::ExternalSink, -exit_value},
                                        {AccountId::Underwriter, exit_value}}));
        } else if (!exit_value.is_zero()) {
            const Money uw_cut = closeout_equity_share(contract, exit_value);
            ledger.post(make_event(closeout_day, EventTag::EquityShare,
                                   {{AccountId::ExternalSink, -exit_value},
                                    {AccountId::Bank, exit_value - uw_cut},
                                    {AccountId::Underwriter, uw_cut}}));
        }
    }
    sim.rho = rho_sum / n;

    // Clawback liens settle (or go through bankruptcy) right after closeout,
    // inside the negotiation window, at the initial lien value.
    if (with_clawback && params.clawback_rate > 0.0 && !payout_events.empty()) {
        constexpr int kAccrualHorizonMonths = 12;
        std::vector<LienCase> cases;
        Money demand;
        for (const auto& event : payout_events) {
            auto attached = attach_lien(event, params.clawback_rate, kAccrualHorizonMonths);
            ledger.post(attached.event);
            demand += attached.lien_case.accrued_value();
            cases.push_back(attached.lien_case);
        }

        const Money bank_position = ledger.balance(AccountId::Bank);
        const bool capped =
            params.limited_liability && demand > money_max(bank_position, Money{});
        if (!capped) {
            for (auto& c : cases) {
                auto settled = settle(c, SettlementOffer::cash(c.accrued_value()));
                ledger.post(settled.event);
            }
        } else {
            Money remaining = money_max(bank_position, Money{});
            for (auto& c : cases) {
                c.firm_assets = remaining;
                auto broke = bankruptcy(c);
                ledger.post(broke.event);
                remaining -= broke.recovered;
            }
        }
    }

    const Money insured_side = ledger.balance(AccountId::Bank) + ledger.balance(AccountId::Firm);
    sim.bank_multiple = insured_side.to_double() / params.original_capital.to_double();

    sim.uw_net = ledger.balance(AccountId::Underwriter);
    if (params.funds_cost_rate > 0.0) {
        // Carrying cost is an external economic cost, not a transfer between
        // the five accounts, so it adjusts the reported net instead of posting.
        const double defaulted_weight = static_cast<double>(payout_events.size()) / n;
        double reserve = defaulted_weight * params.coverage;
        if (params.reserve_rule == ReserveRule::NetOfClawback)
            reserve *= 1.0 - (with_clawback ? params.clawback_rate : 0.0);
        const double invested =
            std::max(0.0, reserve - params.premium_rate * duration * params.coverage);
        sim.uw_net -= fund_face.scaled_by(invested * params.funds_cost_rate * duration);
    }
    return sim;
}

SummaryStats summarize(const std::vector<double>& values, double breakeven) {
    if (values.empty()) throw EmptyInput("summarize: no runs");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        if (lo + 1 >= sorted.size()) return sorted.back();
        const double frac = pos - static_cast<double>(lo);
        return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
    };

    SummaryStats s;
    double sum = 0.0;
    std::size_t past = 0;
    for (double v : sorted) {
        sum += v;
        if (v > breakeven) ++past;
    }
    s.mean = sum / static_cast<double>(sorted.size());
    s.q05 = quantile(0.05);
    s.q25 = quantile(0.25);
    s.q50 = quantile(0.50);
    s.q75 = quantile(0.75);
    s.q95 = quantile(0.95);
    s.frac_past_breakeven = static_cast<double>(past) / static_cast<double>(sorted.size());
    return s;
}

}  // namespace dinsim
