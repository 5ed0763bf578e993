#include "bayestable/bayesrule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bayestable/error.hpp"

namespace bayestable {

namespace {

// CDF over the whole support, in whichever mode the model evaluates.
class CdfTable {
public:
    explicit CdfTable(const BinomialModel& model) : n_(model.n()) {
        if (model.mode() == EvalMode::exact_rational) {
            exact_ = exact_cdf_table(model);
        } else {
            approx_ = float_cdf_table(model);
        }
    }

    std::int64_t n() const noexcept { return n_; }

    // P(X <= k); zero for k < 0.
    ProbValue at(std::int64_t k) const {
        if (exact_) {
            return ProbValue::from_exact(k < 0 ? Rational(0) : (*exact_)[static_cast<std::size_t>(k)]);
        }
        return ProbValue::from_float(k < 0 ? 0.0 : approx_[static_cast<std::size_t>(k)]);
    }

    // Sign of CDF(k) - level.
    int compare(std::int64_t k, const Rational& level) const {
        if (exact_) {
            const Rational& c = k < 0 ? zero_ : (*exact_)[static_cast<std::size_t>(k)];
            return c < level ? -1 : (c > level ? 1 : 0);
        }
        const double c = k < 0 ? 0.0 : approx_[static_cast<std::size_t>(k)];
        const double l = to_double(level);
        return c < l ? -1 : (c > l ? 1 : 0);
    }

private:
    std::int64_t n_;
    std::optional<std::vector<Rational>> exact_;
    std::vector<double> approx_;
    Rational zero_{0};
};

ProbValue difference(const ProbValue& a, const ProbValue& b) {
    if (a.exact && b.exact) {
        return ProbValue::from_exact(*a.exact - *b.exact);
    }
    return ProbValue::from_float(a.value - b.value);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
    }
}

Rational lower_level(double alpha) { return from_double(alpha) / 2; }
Rational upper_level(double alpha) { return Rational(1) - from_double(alpha) / 2; }

// True when the lower endpoint excludes the mass at or below it.
bool excludes_lower(const CdfTable& cdf, std::int64_t k_lo, double alpha) {
    return k_lo > 0 || cdf.compare(0, lower_level(alpha)) < 0;
}

ProbValue coverage_of(const CdfTable& cdf, std::int64_t k_lo, std::int64_t k_hi, double alpha,
                      IntervalConvention convention) {
    if (convention == IntervalConvention::nonstrict_both) {
        return difference(cdf.at(k_hi), cdf.at(k_lo - 1));
    }
    const ProbValue lower = excludes_lower(cdf, k_lo, alpha) ? cdf.at(k_lo) : cdf.at(-1);
    return difference(cdf.at(k_hi), lower);
}

} // namespace

CountData::CountData(std::int64_t n, std::int64_t k) : n_(n), k_(k) {
    if (n < 1) {
        throw DomainError("count data needs n >= 1 throws, got " + std::to_string(n));
    }
    if (k < 0 || k > n) {
        throw DomainError("successes k=" + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
    }
}

const char* to_string(IntervalConvention c) {
    return c == IntervalConvention::nonstrict_both ? "nonstrict-both" : "strict-lower/nonstrict-upper";
}

IntervalConvention parse_convention(std::string_view name) {
    if (name == "nonstrict-both" || name == "nonstrict" || name == "default") {
        return IntervalConvention::nonstrict_both;
    }
    if (name == "strict-lower/nonstrict-upper" || name == "strict-lower" || name == "mixed") {
        return IntervalConvention::strict_lower_nonstrict_upper;
    }
    throw DomainError("unknown interval convention '" + std::string(name) + "'");
}

CentralInterval::CentralInterval(const BinomialModel& model, std::int64_t k_lo, std::int64_t k_hi, double alpha,
                                 IntervalConvention convention)
    : k_lo_(k_lo), k_hi_(k_hi), n_(model.n()), alpha_(alpha), convention_(convention) {
    check_alpha(alpha);
    if (k_lo < 0 || k_lo > k_hi || k_hi > n_) {
        throw DomainError("interval endpoints must satisfy 0 <= k_lo <= k_hi <= n, got (" + std::to_string(k_lo) +
                          ", " + std::to_string(k_hi) + ") with n=" + std::to_string(n_));
    }
    coverage_ = coverage_of(CdfTable(model), k_lo, k_hi, alpha, convention);
}

CentralInterval central_interval(const BinomialModel& model, double alpha, IntervalConvention convention) {
    check_alpha(alpha);
    const CdfTable cdf(model);
    const std::int64_t n = model.n();
    const Rational lo_level = lower_level(alpha);
    const Rational hi_level = upper_level(alpha);

    std::int64_t k_lo = 0;
    std::int64_t k_hi = 0;
    if (convention == IntervalConvention::nonstrict_both) {
        while (k_lo < n && cdf.compare(k_lo, lo_level) < 0) ++k_lo;
        while (k_hi < n && cdf.compare(k_hi, hi_level) < 0) ++k_hi;
    } else {
        // CDF is nondecreasing, so the qualifying sets are prefixes.
        std::int64_t k = 0;
        while (k <= n && cdf.compare(k, lo_level) < 0) ++k;
        k_lo = std::max<std::int64_t>(k - 1, 0);
        k = 0;
        while (k <= n && cdf.compare(k, hi_level) <= 0) ++k;
        k_hi = std::max<std::int64_t>(k - 1, k_lo);
    }
    return CentralInterval(model, k_lo, k_hi, alpha, convention);
}

Rational width_fraction(std::int64_t k_lo, std::int64_t k_hi, std::int64_t n) {
    if (n < 1 || k_lo < 0 || k_lo > k_hi || k_hi > n) {
        throw DomainError("invalid interval (" + std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                          ") for n=" + std::to_string(n));
    }
    return Rational(k_hi - k_lo, n);
}

Quantity interval_to_distance(std::int64_t k_lo, std::int64_t k_hi, std::int64_t n, const Quantity& span) {
    if (span.value <= 0) {
        throw DomainError("span must be positive, got " + to_string(span.value) + " " + to_string(span.unit));
    }
    return Quantity{width_fraction(k_lo, k_hi, n) * span.value, span.unit};
}

Quantity interval_to_distance(const CentralInterval& interval, std::int64_t n, const Quantity& span) {
    if (interval.n() != n) {
        throw DomainError("interval was computed for n=" + std::to_string(interval.n()) + ", not n=" +
                          std::to_string(n));
    }
    return interval_to_distance(interval.k_lo(), interval.k_hi(), n, span);
}

PosteriorQuery::PosteriorQuery(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
        throw DomainError("posterior bounds must satisfy 0 <= lo < hi <= 1, got (" + std::to_string(lo) + ", " +
                          std::to_string(hi) + ")");
    }
}

double beta_posterior_prob(const CountData& data, const PosteriorQuery& query) {
    const auto a = static_cast<double>(data.k() + 1);
    const auto b = static_cast<double>(data.q() + 1);
    return reg_inc_beta(query.hi, a, b) - reg_inc_beta(query.lo, a, b);
}

std::vector<double> discrete_posterior(const CountData& data, std::int64_t cells) {
    if (cells < 1) {
        throw DomainError("discrete posterior needs at least one cell, got " + std::to_string(cells));
    }
    const auto m = static_cast<std::size_t>(cells);
    const auto k = static_cast<double>(data.k());
    const auto q = static_cast<double>(data.q());

    // The binomial coefficient is common to all cells and cancels.
    std::vector<double> weights(m);
    double max_log = -INFINITY;
    for (std::size_t i = 0; i < m; ++i) {
        const double theta = (static_cast<double>(i) + 0.5) / static_cast<double>(cells);
        const double lw = k * std::log(theta) + q * std::log1p(-theta);
        weights[i] = lw;
        max_log = std::max(max_log, lw);
    }
    // Neumaier summation.
    double sum = 0.0;
    double comp = 0.0;
    for (double& w : weights) {
        w = std::exp(w - max_log);
        const double t = sum + w;
        comp += std::fabs(sum) >= std::fabs(w) ? (sum - t) + w : (w - t) + sum;
        sum = t;
    }
    sum += comp;
    for (double& w : weights) {
        w /= sum;
    }
    return weights;
}

double aggregate_cells(const std::vector<double>& posterior, const PosteriorQuery& query) {
    const auto m = static_cast<double>(posterior.size());
    double total = 0.0;
    for (std::size_t i = 0; i < posterior.size(); ++i) {
        const double mid = (static_cast<double>(i) + 0.5) / m;
        if (mid > query.lo && mid < query.hi) {
            total += posterior[i];
        }
    }
    return total;
}

bool EndpointAudit::reproduced() const {
    return std::any_of(computed.begin(), computed.end(), [&](const CentralInterval& c) {
        return c.k_lo() == claimed_lo && c.k_hi() == claimed_hi;
    });
}

EndpointAudit audit_endpoints(const BinomialModel& model, std::int64_t claimed_lo, std::int64_t claimed_hi,
                              double alpha, const std::vector<std::int64_t>& probes) {
    check_alpha(alpha);
    const CdfTable cdf(model);
    if (claimed_lo < 0 || claimed_lo > claimed_hi || claimed_hi > model.n()) {
        throw DomainError("claimed interval outside the support");
    }

    EndpointAudit audit;
    audit.claimed_lo = claimed_lo;
    audit.claimed_hi = claimed_hi;
    audit.alpha = alpha;
    for (std::int64_t k : probes) {
        if (k < 0 || k > model.n()) {
            throw DomainError("probe count " + std::to_string(k) + " outside the support");
        }
        audit.probes.emplace_back(k, cdf.at(k));
    }

    const Rational lo_level = lower_level(alpha);
    const Rational hi_level = upper_level(alpha);
    const double target_percent = std::round((1.0 - alpha) * 100.0);
    for (bool strict : {false, true}) {
        const std::int64_t shift = strict ? 1 : 0;
        EndpointReading r{};
        r.strict = strict;
        r.pr_lower = cdf.at(claimed_lo - shift);
        r.pr_upper = cdf.at(claimed_hi - shift);
        r.lower_ok = cdf.compare(claimed_lo - shift, lo_level) < 0;
        r.upper_ok = cdf.compare(claimed_hi - shift, hi_level) <= 0;
        r.coverage = difference(r.pr_upper, r.pr_lower);
        r.coverage_ok = std::round(r.coverage.value * 100.0) == target_percent;
        audit.readings.push_back(std::move(r));
    }

    for (auto convention : {IntervalConvention::nonstrict_both, IntervalConvention::strict_lower_nonstrict_upper}) {
        audit.computed.push_back(central_interval(model, alpha, convention));
    }
    audit.claimed_inclusive_coverage = difference(cdf.at(claimed_hi), cdf.at(claimed_lo - 1));
    return audit;
}

} // namespace bayestable
