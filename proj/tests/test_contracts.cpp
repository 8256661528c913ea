#include <doctest.h>

#include <cmath>

#include "dinsim/contracts.hpp"
#include "dinsim/errors.hpp"

using namespace dinsim;

namespace {
Money m(const char* s) { return Money::parse(s); }
}  // namespace

TEST_CASE("annual premium") {
    CHECK(annual_premium(DinContract(m("100"), 0.05, 0.5, 1.0)) == m("5"));
    CHECK(annual_premium(DinContract(m("100"), 0.0, 0.5, 1.0)) == Money{});
    CHECK(annual_premium(DinContract(m("250"), 0.04, 0.5, 0.5)) == m("5"));
}

TEST_CASE("contract invariants enforced at construction") {
    CHECK_THROWS_AS(DinContract(Money{}, 0.05, 0.5, 1.0), InvalidContract);
    CHECK_THROWS_AS(DinContract(m("100"), 1.5, 0.5, 1.0), InvalidContract);
    CHECK_THROWS_AS(DinContract(m("100"), 0.05, -0.1, 1.0), InvalidContract);
    CHECK_THROWS_AS(DinContract(m("100"), 0.05, 0.5, 0.0), InvalidContract);
    CHECK_THROWS_AS(DinContract(m("100"), 0.05, 0.5, 1.0, 0), InvalidContract);
}

TEST_CASE("din payout pays face and moves the asset") {
    const DinContract contract(m("100"));
    SUBCASE("partial asset value") {
        const auto payout = din_payout(contract, m("40"));
        CHECK(payout.insured_receives == m("100"));
        CHECK(payout.underwriter_receives_asset == m("40"));
    }
    SUBCASE("worthless asset") {
        const auto payout = din_payout(contract, Money{});
        CHECK(payout.insured_receives == m("100"));
        CHECK(payout.underwriter_receives_asset == Money{});
    }
    SUBCASE("one ledger-unit short of face still defaults") {
        const auto payout = din_payout(contract, m("99"));
        CHECK(payout.insured_receives == m("100"));
        CHECK(payout.underwriter_receives_asset == m("99"));
    }
    SUBCASE("no default at or above face") {
        CHECK_THROWS_AS(din_payout(contract, m("100")), NotInDefault);
        CHECK_THROWS_AS(din_payout(contract, m("150")), NotInDefault);
    }
}

TEST_CASE("closeout equity share") {
    const DinContract contract(m("100"), 0.05, 0.5);
    CHECK(closeout_equity_share(contract, m("200")) == m("100"));
    CHECK(closeout_equity_share(contract, Money{}) == Money{});
    CHECK(closeout_equity_share(contract, m("86")) == m("43"));
}

TEST_CASE("lien value follows the linear monthly schedule") {
    const ClawbackLien lien(m("100"), 0.623, 12);
    CHECK(lien_value(lien, 0) == m("62.3"));
    CHECK(lien_value(lien, 12) == m("100"));
    CHECK(lien_value(lien, 6) == m("81.15"));  // midpoint of (62.3, 100)
    CHECK(lien_value(lien, 24) == m("100"));
}

TEST_CASE("lien value is monotone, bounded, and exact at the endpoints") {
    for (double l : {0.0, 0.25, 0.623, 1.0}) {
        for (int horizon : {1, 12, 36}) {
            const ClawbackLien lien(m("100"), l, horizon);
            CHECK(lien_value(lien, 0) == m("100").scaled_by(l));
            Money prev = lien_value(lien, 0);
            for (int month = 1; month <= 2 * horizon; ++month) {
                const Money v = lien_value(lien, month);
                CHECK(v >= prev);
                CHECK(v <= lien.payment_value);
                if (month >= horizon) CHECK(v == lien.payment_value);
                prev = v;
            }
        }
    }
}

TEST_CASE("equity settlement share") {
    CHECK(equity_settlement_share(m("50"), m("200")) == doctest::Approx(0.25));
    CHECK(equity_settlement_share(Money{}, m("200")) == 0.0);
    CHECK(equity_settlement_share(m("300"), m("200")) == 1.0);  // capped at the whole allocation
    CHECK_THROWS_AS(equity_settlement_share(m("50"), Money{}), ZeroAllocation);
}

TEST_CASE("equity settlement share stays in [0, 1]") {
    for (const char* policy : {"0", "0.0001", "1", "199.9999", "200", "5000"}) {
        const double share = equity_settlement_share(m(policy), m("200"));
        CHECK(share >= 0.0);
        CHECK(share <= 1.0);
    }
}

TEST_CASE("bundled loan scenario") {
    CHECK(bundled_loan_scenario(0.5, 0.0) == 1.5);
    CHECK(bundled_loan_scenario(0.0, 0.0) == 1.0);
    CHECK(bundled_loan_scenario(1.0, 0.0) == 2.0);
}

TEST_CASE("bundled loan scenario is affine in the default fraction with slope 1") {
    const double premium = 0.03;
    for (int i = 0; i <= 10; ++i) {
        const double f = i / 10.0;
        CHECK(bundled_loan_scenario(f, premium) == doctest::Approx(1.0 + f - premium).epsilon(1e-12));
        if (i > 0) {
            const double slope =
                (bundled_loan_scenario(f, premium) - bundled_loan_scenario(f - 0.1, premium)) / 0.1;
            CHECK(slope == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}
