#pragma once

#include "bayestable/bayesrule.hpp"

namespace bayestable {

enum class FitVerdict { consistent, discrepant };

const char* to_string(FitVerdict v);

struct FitReport {
    double lr = 1.0;
    double log_lr = 0.0;
    double g2 = 0.0;
    double p_value = 1.0;
    double theta0 = 0.5;
    double threshold = 5.0;
    FitVerdict verdict = FitVerdict::consistent;
};

inline constexpr double default_lr_threshold = 5.0;

// ln L(k/n) - ln L(theta0); computed as a sum of two bd0 terms.
double log_likelihood_ratio(const CountData& data, double theta0);
double likelihood_ratio(const CountData& data, double theta0);
double g_statistic(const CountData& data, double theta0);

FitReport fit_counts(const CountData& data, double theta0 = 0.5, double threshold = default_lr_threshold);

// LR cutoff equivalent to a G^2 test at level alpha: exp(c/2) with P(chi2_1 > c) = alpha.
double lr_threshold_for_alpha(double alpha);

} // namespace bayestable
