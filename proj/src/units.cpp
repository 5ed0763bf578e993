#include "bayestable/units.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "bayestable/error.hpp"

namespace bayestable {

Rational metres_per(Unit unit) {
    switch (unit) {
    case Unit::perch: return Rational(50292, 10000);
    case Unit::yard: return Rational(9144, 10000);
    case Unit::foot: return Rational(3048, 10000);
    case Unit::metre: return Rational(1);
    }
    throw DomainError("unknown unit");
}

const char* to_string(Unit unit) {
    switch (unit) {
    case Unit::perch: return "perch";
    case Unit::yard: return "yard";
    case Unit::foot: return "foot";
    case Unit::metre: return "metre";
    }
    return "?";
}

Unit parse_unit(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "perch" || s == "perches" || s == "rod" || s == "rods" || s == "pole") return Unit::perch;
    if (s == "yard" || s == "yards" || s == "yd") return Unit::yard;
    if (s == "foot" || s == "feet" || s == "ft") return Unit::foot;
    if (s == "metre" || s == "metres" || s == "meter" || s == "meters" || s == "m") return Unit::metre;
    throw DomainError("unknown unit '" + std::string(name) + "'");
}

Quantity convert(const Quantity& q, Unit to) {
    if (q.unit == to) {
        return q;
    }
    return Quantity{q.value * metres_per(q.unit) / metres_per(to), to};
}

MapDistance map_distance(const Rational& perches) {
    if (perches < 0) {
        throw DomainError("map distance must be nonnegative, got " + to_string(perches) + " perch");
    }
    MapDistance d;
    d.metres = convert(Quantity{perches, Unit::perch}, Unit::metre);
    d.display = round_sig(d.metres.to_double(), 3);
    return d;
}

MapDistance map_distance(double perches) {
    if (!(perches >= 0.0)) {
        throw DomainError("map distance must be nonnegative, got " + std::to_string(perches) + " perch");
    }
    return map_distance(from_double(perches));
}

double round_sig(double x, int digits) {
    return std::stod(format_sig(x, digits));
}

std::string format_sig(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string format_fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

} // namespace bayestable
