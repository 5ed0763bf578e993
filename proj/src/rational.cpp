#include "bayestable/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>

#include "bayestable/error.hpp"

namespace bayestable {

namespace mp = boost::multiprecision;

double to_double(const Rational& r) {
    const BigInt& num = mp::numerator(r);
    const BigInt& den = mp::denominator(r);
    if (num == 0) {
        return 0.0;
    }
    const bool negative = num < 0;
    const BigInt mag = negative ? BigInt(-num) : num;

    // Scale so the integer quotient carries 64 or 65 significant bits.
    long shift = 64 - (static_cast<long>(mp::msb(mag)) - static_cast<long>(mp::msb(den)));
    BigInt q;
    BigInt rem;
    if (shift >= 0) {
        mp::divide_qr(BigInt(mag << shift), den, q, rem);
    } else {
        mp::divide_qr(mag, BigInt(den << -shift), q, rem);
    }
    bool sticky = rem != 0;
    if (mp::msb(q) >= 64) {
        sticky = sticky || mp::bit_test(q, 0);
        q >>= 1;
        --shift;
    }
    auto bits = q.convert_to<std::uint64_t>();
    if (sticky) {
        bits |= 1u;
    }
    if (shift > std::numeric_limits<int>::max() || shift < std::numeric_limits<int>::min()) {
        return negative ? -0.0 : 0.0;
    }
    const double value = std::ldexp(static_cast<double>(bits), static_cast<int>(-shift));
    return negative ? -value : value;
}

Rational from_double(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("cannot represent non-finite value as a rational");
    }
    if (x == 0.0) {
        return Rational(0);
    }
    int exponent = 0;
    const double mantissa = std::frexp(std::fabs(x), &exponent);
    // mantissa in [0.5, 1): 53 bits are exact after scaling by 2^53.
    const auto bits = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    exponent -= 53;
    BigInt num(bits);
    BigInt den(1);
    if (exponent >= 0) {
        num <<= exponent;
    } else {
        den <<= -exponent;
    }
    Rational r(num, den);
    return x < 0 ? Rational(-r) : r;
}

namespace {

bool all_digits(std::string_view s) {
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

BigInt parse_integer(std::string_view digits) {
    BigInt v(0);
    for (char c : digits) {
        v = v * 10 + (c - '0');
    }
    return v;
}

[[noreturn]] void bad_number(std::string_view text) {
    throw DomainError("not a number: '" + std::string(text) + "'");
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) {
        bad_number(text);
    }

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const Rational num = parse_rational(s.substr(0, slash));
        const Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) {
            throw DomainError("zero denominator in '" + std::string(text) + "'");
        }
        return num / den;
    }

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = s.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (exp_text.empty() || exp_text.size() > 6 || !all_digits(exp_text)) {
            bad_number(text);
        }
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
        s = s.substr(0, e);
    }

    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if ((int_part.empty() && frac_part.empty()) || !all_digits(int_part) || !all_digits(frac_part)) {
        bad_number(text);
    }

    BigInt num = parse_integer(int_part);
    for (char c : frac_part) {
        num = num * 10 + (c - '0');
    }
    exponent -= static_cast<long>(frac_part.size());

    Rational r;
    if (exponent >= 0) {
        r = Rational(num * mp::pow(BigInt(10), static_cast<unsigned>(exponent)));
    } else {
        r = Rational(num, mp::pow(BigInt(10), static_cast<unsigned>(-exponent)));
    }
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
    if (mp::denominator(r) == 1) {
        return mp::numerator(r).str();
    }
    return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

} // namespace bayestable
