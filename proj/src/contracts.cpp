#include "dinsim/contracts.hpp"

#include <algorithm>

#include "dinsim/errors.hpp"

namespace dinsim {

DinContract::DinContract(Money face_, double premium_rate_, double equity_share_,
                         double coverage_, int term_years_)
    : face(face_),
      premium_rate(premium_rate_),
      equity_share(equity_share_),
      coverage(coverage_),
      term_years(term_years_) {
    if (!(face > Money{})) throw InvalidContract("DinContract: face must be > 0");
    if (premium_rate < 0.0 || premium_rate > 1.0)
        throw InvalidContract("DinContract: premium_rate outside [0, 1]");
    if (equity_share < 0.0 || equity_share > 1.0)
        throw InvalidContract("DinContract: equity_share outside [0, 1]");
    if (!(coverage > 0.0) || coverage > 1.0)
        throw InvalidContract("DinContract: coverage outside (0, 1]");
    if (term_years < 1) throw InvalidContract("DinContract: term_years must be >= 1");
}

const char* to_string(LienState s) {
    switch (s) {
        case LienState::NegotiationWindow: return "NegotiationWindow";
        case LienState::Accruing: return "Accruing";
        case LienState::Settled: return "Settled";
        case LienState::Bankrupt: return "Bankrupt";
    }
    return "?";
}

ClawbackLien::ClawbackLien(Money payment_value_, double initial_fraction_,
                           int accrual_horizon_months_)
    : payment_value(payment_value_),
      initial_fraction(initial_fraction_),
      accrual_horizon_months(accrual_horizon_months_) {
    if (payment_value.is_negative())
        throw InvalidContract("ClawbackLien: payment_value must be >= 0");
    if (initial_fraction < 0.0 || initial_fraction > 1.0)
        throw InvalidContract("ClawbackLien: initial_fraction outside [0, 1]");
    if (accrual_horizon_months < 1)
        throw InvalidContract("ClawbackLien: accrual_horizon_months must be >= 1");
}

SettlementOffer SettlementOffer::cash(Money amount) {
    if (amount.is_negative()) throw InvalidContract("SettlementOffer: cash_amount must be >= 0");
    return SettlementOffer{Kind::Cash, amount, Money{}, Money{}};
}

SettlementOffer SettlementOffer::equity(Money policy_amount, Money investment_allocation) {
    if (policy_amount.is_negative())
        throw InvalidContract("SettlementOffer: policy_amount must be >= 0");
    if (!(investment_allocation > Money{}))
        throw ZeroAllocation("SettlementOffer: investment_allocation must be > 0");
    return SettlementOffer{Kind::EquityTransfer, Money{}, policy_amount, investment_allocation};
}

Money annual_premium(const DinContract& contract) {
    return contract.face.scaled_by(contract.premium_rate * contract.coverage);
}

DinPayout din_payout(const DinContract& contract, Money asset_value_at_default) {
    if (asset_value_at_default.is_negative())
        throw InvalidContract("din_payout: asset value must be >= 0");
    if (asset_value_at_default >= contract.face)
        throw NotInDefault("din_payout: asset value " + asset_value_at_default.str() +
                           " >= face " + contract.face.str());
    return DinPayout{contract.face.scaled_by(contract.coverage), asset_value_at_default};
}

Money closeout_equity_share(const DinContract& contract, Money equity_value) {
    if (equity_value.is_negative())
        throw InvalidContract("closeout_equity_share: equity value must be >= 0");
    return equity_value.scaled_by(contract.equity_share);
}

Money lien_value(const ClawbackLien& lien, int months) {
    if (months < 0) throw InvalidContract("lien_value: months must be >= 0");
    if (months >= lien.accrual_horizon_months) return lien.payment_value;
    const double l = lien.initial_fraction;
    const double fraction =
        l + (1.0 - l) * static_cast<double>(months) / static_cast<double>(lien.accrual_horizon_months);
    return lien.payment_value.scaled_by(std::min(1.0, fraction));
}

double equity_settlement_share(Money policy_amount, Money investment_allocation) {
    if (!(investment_allocation > Money{}))
        throw ZeroAllocation("equity_settlement_share: investment_allocation must be > 0");
    if (policy_amount.is_negative())
        throw InvalidContract("equity_settlement_share: policy_amount must be >= 0");
    return std::min(1.0, policy_amount.to_double() / investment_allocation.to_double());
}

double bundled_loan_scenario(double default_fraction, double premium_fraction) {
    if (default_fraction < 0.0 || default_fraction > 1.0)
        throw InvalidContract("bundled_loan_scenario: default_fraction outside [0, 1]");
    if (premium_fraction < 0.0)
        throw InvalidContract("bundled_loan_scenario: premium_fraction must be >= 0");
    return 1.0 + default_fraction - premium_fraction;
}

}  // namespace dinsim
