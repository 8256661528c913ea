#include "dinsim/ledger.hpp"

#include <sstream>

#include "dinsim/errors.hpp"

namespace dinsim {

const char* to_string(AccountId id) {
    switch (id) {
        case AccountId::Bank: return "Bank";
        case AccountId::Underwriter: return "Underwriter";
        case AccountId::Firm: return "Firm";
        case AccountId::PortfolioCompanies: return "PortfolioCompanies";
        case AccountId::ExternalSink: return "ExternalSink";
    }
    return "?";
}

const char* to_string(EventTag tag) {
    switch (tag) {
        case EventTag::PremiumPaid: return "PremiumPaid";
        case EventTag::DinPayout: return "DinPayout";
        case EventTag::AssetTransfer: return "AssetTransfer";
        case EventTag::LienAttached: return "LienAttached";
        case EventTag::LienAccrued: return "LienAccrued";
        case EventTag::LienSettledCash: return "LienSettledCash";
        case EventTag::LienSettledEquity: return "LienSettledEquity";
        case EventTag::BankruptcyRecovery: return "BankruptcyRecovery";
        case EventTag::EquityShare: return "EquityShare";
    }
    return "?";
}

AccountId account_from_string(const std::string& name) {
    for (std::size_t i = 0; i < kAccountCount; ++i) {
        auto id = static_cast<AccountId>(i);
        if (name == to_string(id)) return id;
    }
    throw Error("unknown account '" + name + "'");
}

EventTag tag_from_string(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(EventTag::EquityShare); ++i) {
        auto tag = static_cast<EventTag>(i);
        if (name == to_string(tag)) return tag;
    }
    throw Error("unknown event tag '" + name + "'");
}

Money LedgerEvent::posting_sum() const {
    Money sum;
    for (const auto& p : postings) sum += p.amount;
    return sum;
}

Money LedgerEvent::credited_amount() const {
    Money sum;
    for (const auto& p : postings)
        if (p.amount > Money{}) sum += p.amount;
    return sum;
}

LedgerEvent make_event(int day, EventTag tag, std::initializer_list<Posting> postings) {
    return LedgerEvent{day, tag, std::vector<Posting>(postings)};
}

void Ledger::post(const LedgerEvent& event) {
    if (!event.posting_sum().is_zero())
        throw UnbalancedEvent("post_event: postings sum to " + event.posting_sum().str() +
                              " for tag " + to_string(event.tag));
    for (const auto& p : event.postings)
        balances_[static_cast<std::size_t>(p.account)] += p.amount;
    log_.push_back(event);
}

Money Ledger::total() const {
    Money sum;
    for (const auto& b : balances_) sum += b;
    return sum;
}

Ledger Ledger::replay(const std::vector<LedgerEvent>& log) {
    Ledger ledger;
    for (const auto& e : log) ledger.post(e);
    return ledger;
}

std::string Ledger::export_log() const {
    std::string out;
    for (const auto& e : log_) {
        out += std::to_string(e.day);
        out += ',';
        out += to_string(e.tag);
        for (const auto& p : e.postings) {
            out += ',';
            out += to_string(p.account);
            out += ',';
            out += p.amount.str();
        }
        out += '\n';
    }
    return out;
}

std::vector<LedgerEvent> Ledger::parse_log(const std::string& text) {
    std::vector<LedgerEvent> events;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string field;
        LedgerEvent event;
        if (!std::getline(fields, field, ',')) throw Error("ledger log: missing day");
        event.day = std::stoi(field);
        if (!std::getline(fields, field, ',')) throw Error("ledger log: missing tag");
        event.tag = tag_from_string(field);
        while (std::getline(fields, field, ',')) {
            Posting p;
            p.account = account_from_string(field);
            if (!std::getline(fields, field, ',')) throw Error("ledger log: posting without amount");
            p.amount = Money::parse(field);
            event.postings.push_back(p);
        }
        events.push_back(event);
    }
    return events;
}

}  // namespace dinsim
