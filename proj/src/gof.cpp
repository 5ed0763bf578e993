#include "bayestable/gof.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bayestable/error.hpp"

namespace bayestable {

namespace {

void check_theta0(double theta0) {
    if (!(theta0 > 0.0 && theta0 < 1.0)) {
        throw DomainError("null chance theta0 must lie strictly inside (0,1), got " + std::to_string(theta0));
    }
}

} // namespace

const char* to_string(FitVerdict v) {
    return v == FitVerdict::consistent ? "consistent" : "discrepant";
}

double log_likelihood_ratio(const CountData& data, double theta0) {
    check_theta0(theta0);
    const auto n = static_cast<double>(data.n());
    // k ln(k/(n t)) + q ln(q/(n(1-t))) == bd0(k, n t) + bd0(q, n(1-t)): the linear
    // parts of the two bd0 terms cancel.
    const double value = detail::bd0(static_cast<double>(data.k()), n * theta0) +
                         detail::bd0(static_cast<double>(data.q()), n * (1.0 - theta0));
    return std::max(0.0, value);
}

double likelihood_ratio(const CountData& data, double theta0) {
    return std::exp(log_likelihood_ratio(data, theta0));
}

double g_statistic(const CountData& data, double theta0) {
    return 2.0 * log_likelihood_ratio(data, theta0);
}

FitReport fit_counts(const CountData& data, double theta0, double threshold) {
    if (!(threshold > 1.0)) {
        throw DomainError("likelihood-ratio threshold must exceed 1, got " + std::to_string(threshold));
    }
    FitReport report;
    report.theta0 = theta0;
    report.threshold = threshold;
    report.log_lr = log_likelihood_ratio(data, theta0);
    report.lr = std::exp(report.log_lr);
    report.g2 = 2.0 * report.log_lr;
    report.p_value = chisq1_sf(report.g2);
    report.verdict = report.lr < threshold ? FitVerdict::consistent : FitVerdict::discrepant;
    return report;
}

double lr_threshold_for_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
    }
    // chisq1_sf is decreasing; bisect for the upper alpha point.
    double lo = 0.0;
    double hi = 1.0;
    while (chisq1_sf(hi) > alpha) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (chisq1_sf(mid) > alpha ? lo : hi) = mid;
    }
    return std::exp(0.5 * hi);
}

} // namespace bayestable
