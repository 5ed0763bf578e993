#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace bayestable {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Nearest double to r (correctly rounded outside the subnormal range).
double to_double(const Rational& r);

// Exact value of a finite double.
Rational from_double(double x);

// Parses a plain decimal such as "0.5", "-19.7", "1e-3" or a ratio "1/2" exactly.
Rational parse_rational(std::string_view text);

// "num/den", or just "num" for integers.
std::string to_string(const Rational& r);

} // namespace bayestable
