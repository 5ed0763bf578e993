#pragma once

// Binomial kernels in two evaluation modes, plus the regularized incomplete
// beta function and the chi-square (1 df) survival function.
//
// Exact mode is used when the success chance is a rational and n is at most
// BinomialModel::max_exact_trials; every probability is then a ratio of
// integers with denominator dividing den(theta)^n. Otherwise probabilities are
// evaluated in log space in double precision.

#include <cstdint>
#include <optional>
#include <vector>

#include "bayestable/rational.hpp"

namespace bayestable {

enum class EvalMode { exact_rational, float_log_space };

const char* to_string(EvalMode mode);

struct ProbValue {
    double value = 0.0;
    EvalMode mode = EvalMode::float_log_space;
    std::optional<Rational> exact;  // set iff mode == exact_rational

    static ProbValue from_exact(Rational r);
    static ProbValue from_float(double v);
};

class BinomialModel {
public:
    static constexpr std::int64_t max_exact_trials = 1024;

    // Rational chance: exact mode when n <= max_exact_trials.
    BinomialModel(std::int64_t n, Rational theta);
    // Real chance: always float mode.
    BinomialModel(std::int64_t n, double theta);

    std::int64_t n() const noexcept { return n_; }
    double theta() const noexcept { return theta_; }
    const std::optional<Rational>& exact_theta() const noexcept { return exact_theta_; }
    EvalMode mode() const noexcept;

    // Same distribution, forced into float mode.
    BinomialModel as_float() const { return BinomialModel(n_, theta_); }

private:
    std::int64_t n_;
    double theta_;
    std::optional<Rational> exact_theta_;
};

ProbValue binom_pmf(const BinomialModel& model, std::int64_t k);
ProbValue binom_cdf(const BinomialModel& model, std::int64_t k);

// Smallest k with CDF(k) >= p.
std::int64_t binom_quantile(const BinomialModel& model, double p);
std::int64_t binom_quantile(const BinomialModel& model, const Rational& p);

// Whole-support tables, index k = 0..n. Exact tables require exact mode.
std::vector<Rational> exact_pmf_table(const BinomialModel& model);
std::vector<Rational> exact_cdf_table(const BinomialModel& model);
std::vector<double> float_cdf_table(const BinomialModel& model);

// log P(X = k) in double precision, saddle-point form. -inf for impossible k.
double log_binom_pmf(std::int64_t n, std::int64_t k, double theta);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

// P(chi2_1 > g).
double chisq1_sf(double g);

// Numerical helpers shared with the goodness-of-fit code.
namespace detail {

// x log(x/m) + m - x, accurate when x is close to m.
double bd0(double x, double m);

// log Gamma(z+1) - log(sqrt(2 pi z) (z/e)^z), z > 0.
double stirlerr(double z);

} // namespace detail

} // namespace bayestable
