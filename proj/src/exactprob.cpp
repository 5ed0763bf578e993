#include "bayestable/exactprob.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bayestable/error.hpp"

namespace bayestable {

namespace mp = boost::multiprecision;

const char* to_string(EvalMode mode) {
    return mode == EvalMode::exact_rational ? "exact-rational" : "float64-log-space";
}

ProbValue ProbValue::from_exact(Rational r) {
    ProbValue v;
    v.value = to_double(r);
    v.mode = EvalMode::exact_rational;
    v.exact = std::move(r);
    return v;
}

ProbValue ProbValue::from_float(double x) {
    ProbValue v;
    v.value = x;
    v.mode = EvalMode::float_log_space;
    return v;
}

namespace {

void check_trials(std::int64_t n) {
    if (n < 1) {
        throw DomainError("binomial model needs n >= 1, got " + std::to_string(n));
    }
}

void check_count(const BinomialModel& model, std::int64_t k) {
    if (k < 0 || k > model.n()) {
        throw DomainError("count k=" + std::to_string(k) + " outside [0, " + std::to_string(model.n()) + "]");
    }
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
    }
}

void require_exact(const BinomialModel& model) {
    if (model.mode() != EvalMode::exact_rational) {
        throw DomainError("exact table requested for a float-mode binomial model");
    }
}

// Integer numerators C(n,k) p^k (q-p)^(n-k) over the common denominator q^n.
struct ExactTerms {
    std::vector<BigInt> numerators;
    BigInt denominator;
};

ExactTerms exact_terms(const BinomialModel& model) {
    const std::int64_t n = model.n();
    const Rational& theta = *model.exact_theta();
    const BigInt p = mp::numerator(theta);
    const BigInt q = mp::denominator(theta);
    const BigInt r = q - p;

    std::vector<BigInt> pow_p(static_cast<std::size_t>(n + 1));
    std::vector<BigInt> pow_r(static_cast<std::size_t>(n + 1));
    pow_p[0] = 1;
    pow_r[0] = 1;
    for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i) {
        pow_p[i] = pow_p[i - 1] * p;
        pow_r[i] = pow_r[i - 1] * r;
    }

    ExactTerms terms;
    terms.numerators.resize(static_cast<std::size_t>(n + 1));
    BigInt choose(1);
    for (std::int64_t k = 0; k <= n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        terms.numerators[ku] = choose * pow_p[ku] * pow_r[static_cast<std::size_t>(n - k)];
        choose = choose * (n - k) / (k + 1);
    }
    terms.denominator = mp::pow(q, static_cast<unsigned>(n));
    return terms;
}

double float_pmf(const BinomialModel& model, std::int64_t k) {
    return std::exp(log_binom_pmf(model.n(), k, model.theta()));
}

// Sums from the smaller tail; the complementary branch only runs where CDF is
// already of order one, so 1 - tail loses no relative accuracy.
double float_cdf(const BinomialModel& model, std::int64_t k) {
    const std::int64_t n = model.n();
    if (k >= n) {
        return 1.0;
    }
    if (static_cast<double>(k) < static_cast<double>(n) * model.theta()) {
        double sum = 0.0;
        for (std::int64_t j = 0; j <= k; ++j) {
            sum += float_pmf(model, j);
        }
        return std::min(sum, 1.0);
    }
    double tail = 0.0;
    for (std::int64_t j = n; j > k; --j) {
        tail += float_pmf(model, j);
    }
    return std::max(0.0, 1.0 - tail);
}

} // namespace

BinomialModel::BinomialModel(std::int64_t n, Rational theta) : n_(n), theta_(to_double(theta)) {
    check_trials(n);
    if (theta < 0 || theta > 1) {
        throw DomainError("success chance must lie in [0,1], got " + bayestable::to_string(theta));
    }
    exact_theta_ = std::move(theta);
}

BinomialModel::BinomialModel(std::int64_t n, double theta) : n_(n), theta_(theta) {
    check_trials(n);
    check_probability(theta, "success chance");
}

EvalMode BinomialModel::mode() const noexcept {
    return exact_theta_ && n_ <= max_exact_trials ? EvalMode::exact_rational : EvalMode::float_log_space;
}

ProbValue binom_pmf(const BinomialModel& model, std::int64_t k) {
    check_count(model, k);
    if (model.mode() == EvalMode::exact_rational) {
        const Rational& theta = *model.exact_theta();
        const BigInt p = mp::numerator(theta);
        const BigInt q = mp::denominator(theta);
        const std::int64_t n = model.n();
        BigInt choose(1);
        for (std::int64_t j = 0; j < k; ++j) {
            choose = choose * (n - j) / (j + 1);
        }
        const BigInt num = choose * mp::pow(p, static_cast<unsigned>(k)) *
                           mp::pow(BigInt(q - p), static_cast<unsigned>(n - k));
        return ProbValue::from_exact(Rational(num, mp::pow(q, static_cast<unsigned>(n))));
    }
    return ProbValue::from_float(float_pmf(model, k));
}

ProbValue binom_cdf(const BinomialModel& model, std::int64_t k) {
    check_count(model, k);
    if (model.mode() == EvalMode::exact_rational) {
        if (k == model.n()) {
            return ProbValue::from_exact(Rational(1));
        }
        const ExactTerms terms = exact_terms(model);
        BigInt sum(0);
        for (std::int64_t j = 0; j <= k; ++j) {
            sum += terms.numerators[static_cast<std::size_t>(j)];
        }
        return ProbValue::from_exact(Rational(sum, terms.denominator));
    }
    return ProbValue::from_float(float_cdf(model, k));
}

std::vector<Rational> exact_pmf_table(const BinomialModel& model) {
    require_exact(model);
    const ExactTerms terms = exact_terms(model);
    std::vector<Rational> table;
    table.reserve(terms.numerators.size());
    for (const BigInt& num : terms.numerators) {
        table.emplace_back(num, terms.denominator);
    }
    return table;
}

std::vector<Rational> exact_cdf_table(const BinomialModel& model) {
    require_exact(model);
    const ExactTerms terms = exact_terms(model);
    std::vector<Rational> table;
    table.reserve(terms.numerators.size());
    BigInt sum(0);
    for (const BigInt& num : terms.numerators) {
        sum += num;
        table.emplace_back(sum, terms.denominator);
    }
    return table;
}

std::vector<double> float_cdf_table(const BinomialModel& model) {
    const std::int64_t n = model.n();
    std::vector<double> pmf(static_cast<std::size_t>(n + 1));
    for (std::int64_t k = 0; k <= n; ++k) {
        pmf[static_cast<std::size_t>(k)] = float_pmf(model, k);
    }
    std::vector<double> cdf(pmf.size());
    const double mean = static_cast<double>(n) * model.theta();

    double lower = 0.0;
    for (std::int64_t k = 0; k <= n && static_cast<double>(k) < mean; ++k) {
        lower += pmf[static_cast<std::size_t>(k)];
        cdf[static_cast<std::size_t>(k)] = std::min(lower, 1.0);
    }
    double tail = 0.0;
    for (std::int64_t k = n; k >= 0 && static_cast<double>(k) >= mean; --k) {
        cdf[static_cast<std::size_t>(k)] = std::max(0.0, 1.0 - tail);
        tail += pmf[static_cast<std::size_t>(k)];
    }
    return cdf;
}

std::int64_t binom_quantile(const BinomialModel& model, const Rational& p) {
    if (p < 0 || p > 1) {
        throw DomainError("quantile level must lie in [0,1], got " + bayestable::to_string(p));
    }
    if (model.mode() == EvalMode::exact_rational) {
        const std::vector<Rational> cdf = exact_cdf_table(model);
        const auto it = std::find_if(cdf.begin(), cdf.end(), [&](const Rational& c) { return c >= p; });
        return static_cast<std::int64_t>(it - cdf.begin());
    }
    return binom_quantile(model, to_double(p));
}

std::int64_t binom_quantile(const BinomialModel& model, double p) {
    check_probability(p, "quantile level");
    if (model.mode() == EvalMode::exact_rational) {
        return binom_quantile(model, from_double(p));
    }
    const std::vector<double> cdf = float_cdf_table(model);
    const auto it = std::find_if(cdf.begin(), cdf.end(), [p](double c) { return c >= p; });
    if (it == cdf.end()) {
        return model.n();
    }
    return static_cast<std::int64_t>(it - cdf.begin());
}

} // namespace bayestable
