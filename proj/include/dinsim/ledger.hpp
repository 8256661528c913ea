#pragma once

#include <array>
#include <string>
#include <vector>

#include "dinsim/money.hpp"

namespace dinsim {

enum class AccountId { Bank, Underwriter, Firm, PortfolioCompanies, ExternalSink };
inline constexpr std::size_t kAccountCount = 5;

enum class EventTag {
    PremiumPaid,
    DinPayout,
    AssetTransfer,
    LienAttached,
    LienAccrued,
    LienSettledCash,
    LienSettledEquity,
    BankruptcyRecovery,
    EquityShare,
};

const char* to_string(AccountId id);
const char* to_string(EventTag tag);
AccountId account_from_string(const std::string& name);
EventTag tag_from_string(const std::string& name);

struct Posting {
    AccountId account;
    Money amount;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// One timestamped double-entry event. Postings must sum to exactly zero;
/// marker events (LienAttached, LienAccrued) carry no postings.
struct LedgerEvent {
    int day = 0;
    EventTag tag = EventTag::PremiumPaid;
    std::vector<Posting> postings;

    Money posting_sum() const;
    /// Sum of the event's positive postings (e.g. the amount a DinPayout delivers).
    Money credited_amount() const;

    friend bool operator==(const LedgerEvent&, const LedgerEvent&) = default;
};

LedgerEvent make_event(int day, EventTag tag, std::initializer_list<Posting> postings);

/// Append-only zero-sum ledger over the five fixed accounts. Balances are
/// derived state; replaying the log reproduces them exactly.
class Ledger {
public:
    /// Throws UnbalancedEvent unless the postings sum to zero.
    void post(const LedgerEvent& event);

    Money balance(AccountId id) const { return balances_[static_cast<std::size_t>(id)]; }
    Money total() const;
    const std::vector<LedgerEvent>& log() const { return log_; }

    static Ledger replay(const std::vector<LedgerEvent>& log);

    /// Line-delimited export, one event per line:
    ///   day,tag[,account,amount]...
    /// Amounts always carry four decimals; output is byte-stable across platforms.
    std::string export_log() const;
    static std::vector<LedgerEvent> parse_log(const std::string& text);

private:
    std::array<Money, kAccountCount> balances_{};
    std::vector<LedgerEvent> log_;
};

}  // namespace dinsim
