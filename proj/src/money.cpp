#include "dinsim/money.hpp"

#include <cctype>
#include <ostream>

#include "dinsim/errors.hpp"

namespace dinsim {

Money Money::parse(const std::string& text) {
    const char* p = text.c_str();
    bool negative = false;
    if (*p == '+' || *p == '-') {
        negative = (*p == '-');
        ++p;
    }
    if (!std::isdigit(static_cast<unsigned char>(*p)))
        throw Error("Money::parse: expected digits in '" + text + "'");
    std::int64_t units = 0;
    while (std::isdigit(static_cast<unsigned char>(*p))) {
        units = units * 10 + (*p - '0');
        ++p;
    }
    std::int64_t frac = 0;
    if (*p == '.') {
        ++p;
        int digits = 0;
        while (std::isdigit(static_cast<unsigned char>(*p))) {
            frac = frac * 10 + (*p - '0');
            ++digits;
            ++p;
        }
        if (digits == 0 || digits > 4)
            throw Error("Money::parse: expected 1..4 fractional digits in '" + text + "'");
        for (; digits < 4; ++digits) frac *= 10;
    }
    if (*p != '\0')
        throw Error("Money::parse: trailing characters in '" + text + "'");
    std::int64_t raw = units * kScale + frac;
    return from_raw(negative ? -raw : raw);
}

std::string Money::str() const {
    std::int64_t raw = raw_;
    std::string sign;
    if (raw < 0) {
        sign = "-";
        raw = -raw;
    }
    std::string out = sign + std::to_string(raw / kScale) + '.';
    std::string frac = std::to_string(raw % kScale);
    out.append(4 - frac.size(), '0');
    out += frac;
    return out;
}

std::ostream& operator<<(std::ostream& os, Money m) { return os << m.str(); }

}  // namespace dinsim
