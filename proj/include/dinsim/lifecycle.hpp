#pragma once

#include <vector>

#include "dinsim/contracts.hpp"
#include "dinsim/ledger.hpp"

namespace dinsim {

/// One clawback lien working its way from attachment to settlement or
/// bankruptcy. A month is 30 simulation days; months_elapsed lives on the
/// lien and is derived from days_since_attach.
struct LienCase {
    ClawbackLien lien;
    int attach_day = 0;
    int negotiation_window_days = 30;
    int days_since_attach = 0;
    Money firm_assets;

    Money accrued_value() const { return lien_value(lien, lien.months_elapsed); }
    bool closed() const {
        return lien.state == LienState::Settled || lien.state == LienState::Bankrupt;
    }
};

struct AttachResult {
    LienCase lien_case;
    LedgerEvent event;  // LienAttached marker, no postings
};

struct AdvanceResult {
    LienCase lien_case;
    std::vector<LedgerEvent> events;  // LienAccrued markers at month boundaries
};

struct SettleResult {
    LienCase lien_case;
    LedgerEvent event;
};

struct BankruptcyResult {
    LienCase lien_case;
    LedgerEvent event;
    Money recovered;
    Money shortfall;
};

/// Creates a lien case from a DinPayout event. The lien's payment value is
/// the amount the payout delivered; the initial accrued value is
/// clawback_rate x payment value. Throws WrongEventKind for any other tag.
AttachResult attach_lien(const LedgerEvent& payout_event, double clawback_rate,
                         int horizon_months, int negotiation_window_days = 30,
                         Money firm_assets = Money{});

/// Advances the case clock. NegotiationWindow flips to Accruing once the
/// window has passed; months_elapsed = floor(days_since_attach / 30); one
/// LienAccrued marker is emitted per month boundary crossed while the value
/// is still growing. Throws CaseClosed on settled or bankrupt cases.
AdvanceResult advance_time(const LienCase& lien_case, int days);

/// Cash: requires cash_amount >= current accrued value and posts the accrued
/// value Firm -> Underwriter. EquityTransfer: posts the policy amount as an
/// asset transfer (the negotiated share is policy / allocation, capped at 1).
/// Both discharge the lien.
SettleResult settle(const LienCase& lien_case, const SettlementOffer& offer);

/// Primary-position recovery of min(accrued value, firm assets); the rest is
/// the underwriter's shortfall.
BankruptcyResult bankruptcy(const LienCase& lien_case);

}  // namespace dinsim
