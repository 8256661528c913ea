#pragma once

#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <compare>
#include <string>
#include <iosfwd>

namespace dinsim {

/// Fixed-point decimal amount with 4 fractional digits, stored as a signed
/// 64-bit count of 0.0001 units. Comparisons and sums are exact; rates and
/// multiples stay in binary floating point and only touch Money through
/// scaled_by / from_double, which round half away from zero.
class Money {
public:
    static constexpr std::int64_t kScale = 10'000;

    constexpr Money() : raw_(0) {}

    static constexpr Money from_raw(std::int64_t raw) {
        Money m;
        m.raw_ = raw;
        return m;
    }
    static constexpr Money from_units(std::int64_t units) { return from_raw(units * kScale); }
    static Money from_double(double value) { return from_raw(std::llround(value * static_cast<double>(kScale))); }

    // Strict parser: optional sign, digits, optional '.' with 1..4 digits.
    static Money parse(const std::string& text);

    constexpr std::int64_t raw() const { return raw_; }
    double to_double() const { return static_cast<double>(raw_) / static_cast<double>(kScale); }
    bool is_zero() const { return raw_ == 0; }
    bool is_negative() const { return raw_ < 0; }

    /// Always renders with exactly four decimals, e.g. "-62.3000".
    std::string str() const;

    /// this x factor, rounded half away from zero at the 4th decimal.
    Money scaled_by(double factor) const {
        return from_raw(std::llround(static_cast<double>(raw_) * factor));
    }

    constexpr Money operator-() const { return from_raw(-raw_); }
    constexpr Money& operator+=(Money o) { raw_ += o.raw_; return *this; }
    constexpr Money& operator-=(Money o) { raw_ -= o.raw_; return *this; }

    friend constexpr Money operator+(Money a, Money b) { return from_raw(a.raw_ + b.raw_); }
    friend constexpr Money operator-(Money a, Money b) { return from_raw(a.raw_ - b.raw_); }
    friend constexpr Money operator*(Money a, std::int64_t k) { return from_raw(a.raw_ * k); }
    friend constexpr Money operator*(std::int64_t k, Money a) { return a * k; }
    friend constexpr bool operator==(Money a, Money b) { return a.raw_ == b.raw_; }
    friend constexpr auto operator<=>(Money a, Money b) { return a.raw_ <=> b.raw_; }

private:
    std::int64_t raw_;
};

std::ostream& operator<<(std::ostream& os, Money m);

inline Money money_min(Money a, Money b) { return a < b ? a : b; }
inline Money money_max(Money a, Money b) { return a < b ? b : a; }

}  // namespace dinsim
