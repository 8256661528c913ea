#include "dinsim/lifecycle.hpp"

#include <algorithm>
#include <string>

#include "dinsim/errors.hpp"

namespace dinsim {

namespace {

constexpr int kDaysPerMonth = 30;

void require_open(const LienCase& c, const char* op) {
    if (c.closed())
        throw CaseClosed(std::string(op) + ": case is " + to_string(c.lien.state));
}

}  // namespace

AttachResult attach_lien(const LedgerEvent& payout_event, double clawback_rate,
                         int horizon_months, int negotiation_window_days, Money firm_assets) {
    if (payout_event.tag != EventTag::DinPayout)
        throw WrongEventKind(std::string("attach_lien: expected DinPayout, got ") +
                             to_string(payout_event.tag));
    if (negotiation_window_days < 0)
        throw InvalidContract("attach_lien: negotiation window must be >= 0");
    if (firm_assets.is_negative())
        throw InvalidContract("attach_lien: firm assets must be >= 0");

    LienCase c{ClawbackLien(payout_event.credited_amount(), clawback_rate, horizon_months),
               payout_event.day, negotiation_window_days, 0, firm_assets};
    return AttachResult{c, LedgerEvent{payout_event.day, EventTag::LienAttached, {}}};
}

AdvanceResult advance_time(const LienCase& lien_case, int days) {
    require_open(lien_case, "advance_time");
    if (days < 0) throw InvalidContract("advance_time: days must be >= 0");

    LienCase next = lien_case;
    next.days_since_attach += days;
    const int months_before = next.lien.months_elapsed;
    next.lien.months_elapsed = next.days_since_attach / kDaysPerMonth;
    if (next.lien.state == LienState::NegotiationWindow &&
        next.days_since_attach >= next.negotiation_window_days)
        next.lien.state = LienState::Accruing;

    std::vector<LedgerEvent> events;
    const int last_growth_month = std::min(next.lien.months_elapsed, next.lien.accrual_horizon_months);
    for (int m = months_before + 1; m <= last_growth_month; ++m)
        events.push_back(LedgerEvent{next.attach_day + m * kDaysPerMonth, EventTag::LienAccrued, {}});
    return AdvanceResult{next, std::move(events)};
}

SettleResult settle(const LienCase& lien_case, const SettlementOffer& offer) {
    require_open(lien_case, "settle");

    LienCase next = lien_case;
    next.lien.state = LienState::Settled;
    const int day = lien_case.attach_day + lien_case.days_since_attach;
    const Money accrued = lien_case.accrued_value();

    if (offer.kind == SettlementOffer::Kind::Cash) {
        if (offer.cash_amount < accrued)
            throw InsufficientCash("settle: cash offer " + offer.cash_amount.str() +
                                   " below accrued value " + accrued.str());
        LedgerEvent event = make_event(day, EventTag::LienSettledCash,
                                       {{AccountId::Firm, -accrued},
                                        {AccountId::Underwriter, accrued}});
        return SettleResult{next, event};
    }

    if (!(offer.investment_allocation > Money{}))
        throw ZeroAllocation("settle: equity offer with zero investment allocation");
    if (offer.policy_amount > lien_case.lien.payment_value)
        throw InvalidOffer("settle: policy amount " + offer.policy_amount.str() +
                           " exceeds lien payment value " + lien_case.lien.payment_value.str());
    LedgerEvent event = make_event(day, EventTag::LienSettledEquity,
                                   {{AccountId::Firm, -offer.policy_amount},
                                    {AccountId::Underwriter, offer.policy_amount}});
    return SettleResult{next, event};
}

BankruptcyResult bankruptcy(const LienCase& lien_case) {
    require_open(lien_case, "bankruptcy");

    LienCase next = lien_case;
    next.lien.state = LienState::Bankrupt;
    const int day = lien_case.attach_day + lien_case.days_since_attach;
    const Money accrued = lien_case.accrued_value();
    const Money recovered = money_min(accrued, lien_case.firm_assets);
    LedgerEvent event = make_event(day, EventTag::BankruptcyRecovery,
                                   {{AccountId::Firm, -recovered},
                                    {AccountId::Underwriter, recovered}});
    return BankruptcyResult{next, event, recovered, accrued - recovered};
}

}  // namespace dinsim
