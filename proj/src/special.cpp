#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bayestable/error.hpp"
#include "bayestable/exactprob.hpp"

namespace bayestable {

namespace detail {

double stirlerr(double z) {
    constexpr double s0 = 1.0 / 12;
    constexpr double s1 = 1.0 / 360;
    constexpr double s2 = 1.0 / 1260;
    constexpr double s3 = 1.0 / 1680;
    constexpr double s4 = 1.0 / 1188;
    if (z <= 15.0) {
        return std::lgamma(z + 1.0) - 0.5 * std::log(2.0 * std::numbers::pi) - (z + 0.5) * std::log(z) + z;
    }
    const double zz = z * z;
    if (z > 500) return (s0 - s1 / zz) / z;
    if (z > 80) return (s0 - (s1 - s2 / zz) / zz) / z;
    if (z > 35) return (s0 - (s1 - (s2 - s3 / zz) / zz) / zz) / z;
    return (s0 - (s1 - (s2 - (s3 - s4 / zz) / zz) / zz) / zz) / z;
}

double bd0(double x, double m) {
    if (x == 0.0) {
        return m;
    }
    if (std::fabs(x - m) < 0.1 * (x + m)) {
        const double v = (x - m) / (x + m);
        double s = (x - m) * v;
        double ej = 2.0 * x * v;
        const double vv = v * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= vv;
            const double s1 = s + ej / (2 * j + 1);
            if (s1 == s) {
                return s1;
            }
            s = s1;
        }
        return s;
    }
    return x * std::log(x / m) + m - x;
}

} // namespace detail

double log_binom_pmf(std::int64_t n, std::int64_t k, double theta) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (k < 0 || k > n) {
        return neg_inf;
    }
    if (theta == 0.0) {
        return k == 0 ? 0.0 : neg_inf;
    }
    if (theta == 1.0) {
        return k == n ? 0.0 : neg_inf;
    }
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    if (k == 0) {
        return nd * std::log1p(-theta);
    }
    if (k == n) {
        return nd * std::log(theta);
    }
    const double qd = nd - kd;
    const double lc = detail::stirlerr(nd) - detail::stirlerr(kd) - detail::stirlerr(qd) -
                      detail::bd0(kd, nd * theta) - detail::bd0(qd, nd * (1.0 - theta));
    const double lf = std::log(2.0 * std::numbers::pi) + std::log(kd) + std::log1p(-kd / nd);
    return lc - 0.5 * lf;
}

namespace {

// log( x^a (1-x)^b / B(a,b) ), saddle-point form.
double log_beta_front(double x, double a, double b) {
    const double n = a + b;
    return -detail::bd0(a, n * x) - detail::bd0(b, n * (1.0 - x)) +
           0.5 * std::log(a * b / (2.0 * std::numbers::pi * n)) + detail::stirlerr(n) - detail::stirlerr(a) -
           detail::stirlerr(b);
}

// Continued fraction for I_x(a,b) (modified Lentz).
double beta_cont_frac(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 20000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) {
            return h;
        }
    }
    throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

} // namespace

double reg_inc_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("reg_inc_beta: shape parameters must be positive, got a=" + std::to_string(a) +
                          " b=" + std::to_string(b));
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("reg_inc_beta: x must lie in [0,1], got " + std::to_string(x));
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_beta_front(x, a, b)) * beta_cont_frac(x, a, b) / a;
    }
    const double y = 1.0 - x;
    return 1.0 - std::exp(log_beta_front(y, b, a)) * beta_cont_frac(y, b, a) / b;
}

double chisq1_sf(double g) {
    if (!(g >= 0.0)) {
        throw DomainError("chisq1_sf: statistic must be nonnegative, got " + std::to_string(g));
    }
    return std::erfc(std::sqrt(0.5 * g));
}

} // namespace bayestable
