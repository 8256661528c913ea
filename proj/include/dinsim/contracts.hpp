#pragma once

#include <cstdint>
#include <utility>

#include "dinsim/money.hpp"

namespace dinsim {

/// Default insurance note on one investment administered as a bank loan.
/// Pays face x coverage on default, with the defaulted asset transferring
/// to the underwriter; the underwriter collects an annual premium and an
/// equity share of surviving investments at closeout.
struct DinContract {
    Money face;               // insured principal
    double premium_rate;      // fraction of covered face, per year
    double equity_share;      // underwriter's share of closeout equity
    double coverage;          // fraction of face insured
    int term_years;

    DinContract(Money face_, double premium_rate_ = 0.05, double equity_share_ = 0.50,
                double coverage_ = 1.0, int term_years_ = 10);
};

enum class LienState { NegotiationWindow, Accruing, Settled, Bankrupt };

const char* to_string(LienState s);

/// Non-derivative lien attached to a DIN payout. Starts at
/// initial_fraction x payment_value and accrues monthly on a linear
/// schedule until it equals the full payment value.
struct ClawbackLien {
    Money payment_value;
    double initial_fraction;       // the clawback lien rate L
    int accrual_horizon_months;
    int months_elapsed = 0;
    LienState state = LienState::NegotiationWindow;

    ClawbackLien(Money payment_value_, double initial_fraction_, int accrual_horizon_months_);
};

struct SettlementOffer {
    enum class Kind { Cash, EquityTransfer };

    Kind kind;
    Money cash_amount;           // Cash only
    Money policy_amount;         // EquityTransfer only
    Money investment_allocation; // EquityTransfer only

    static SettlementOffer cash(Money amount);
    static SettlementOffer equity(Money policy_amount, Money investment_allocation);
};

/// premium_rate x face x coverage, per year.
Money annual_premium(const DinContract& contract);

struct DinPayout {
    Money insured_receives;
    Money underwriter_receives_asset;
};

/// CDS-style settlement of a default: the insured is paid face x coverage
/// and title to the asset moves to the underwriter.
/// Throws NotInDefault when asset_value_at_default >= face.
DinPayout din_payout(const DinContract& contract, Money asset_value_at_default);

/// Underwriter's closeout cut of a surviving investment's equity value.
Money closeout_equity_share(const DinContract& contract, Money equity_value);

/// Accrued lien value after `months` months:
/// payment x min(1, L + (1 - L) x months / horizon).
Money lien_value(const ClawbackLien& lien, int months);

/// Ownership share of the named investment transferred in an equity
/// settlement: min(1, policy_amount / investment_allocation).
double equity_settlement_share(Money policy_amount, Money investment_allocation);

/// The bundled-loan demonstrator: sell the loans at par, collect DIN face
/// on the defaulted fraction, net of premiums. Returns the capital multiple.
double bundled_loan_scenario(double default_fraction, double premium_fraction);

}  // namespace dinsim
