#pragma once

#include <string>
#include <string_view>

#include "bayestable/rational.hpp"

namespace bayestable {

enum class Unit { perch, yard, foot, metre };

// Exact metres per unit: 1 yd = 0.9144 m, 1 perch = 5.5 yd = 16.5 ft.
Rational metres_per(Unit unit);

const char* to_string(Unit unit);

// Accepts singular/plural names and the usual abbreviations (rod, yd, ft, m).
Unit parse_unit(std::string_view name);

struct Quantity {
    Rational value;
    Unit unit = Unit::metre;

    double to_double() const { return bayestable::to_double(value); }
};

Quantity convert(const Quantity& q, Unit to);

struct MapDistance {
    Quantity metres;      // full precision, exact
    double display = 0.0; // metres rounded to 3 significant figures
};

MapDistance map_distance(const Rational& perches);
MapDistance map_distance(double perches);

// Rounds to the given number of significant figures (presentation only).
double round_sig(double x, int digits);
std::string format_sig(double x, int digits);
std::string format_fixed(double x, int decimals);

} // namespace bayestable
