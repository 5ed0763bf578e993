#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bayestable/error.hpp"
#include "bayestable/rational.hpp"

using namespace bayestable;

TEST(Rational, ParsesDecimalsExactly) {
    EXPECT_EQ(parse_rational("0.5"), Rational(1, 2));
    EXPECT_EQ(parse_rational("5.0292"), Rational(12573, 2500));
    EXPECT_EQ(parse_rational("-19.7"), Rational(-197, 10));
    EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
    EXPECT_EQ(parse_rational("2.5E2"), Rational(250));
    EXPECT_EQ(parse_rational(".25"), Rational(1, 4));
    EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
    EXPECT_EQ(parse_rational(" 7 "), Rational(7));
}

TEST(Rational, RejectsGarbage) {
    for (const char* bad : {"", "abc", "1.2.3", "1e", "--1", "1/0", "."}) {
        EXPECT_THROW(parse_rational(bad), DomainError) << bad;
    }
}

TEST(Rational, ToDoubleMatchesCorrectlyRoundedReference) {
    // Reference doubles from Python's float(Fraction), which rounds correctly.
    const Rational pmf78(BigInt("364117140331941513644720124782321188119219525"),
                         BigInt("5708990770823839524233143877797980545530986496"));
    EXPECT_EQ(to_double(pmf78), 0.06377959869768669);
    EXPECT_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
    EXPECT_EQ(to_double(Rational(-2, 7)), -2.0 / 7.0);
    EXPECT_EQ(to_double(Rational(0)), 0.0);
}

TEST(Rational, DoubleRoundTripIsExact) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::ldexp(mant(gen), expo(gen));
        EXPECT_EQ(to_double(from_double(x)), x);
    }
    EXPECT_EQ(from_double(0.5), Rational(1, 2));
    EXPECT_THROW(from_double(std::numeric_limits<double>::infinity()), DomainError);
}
