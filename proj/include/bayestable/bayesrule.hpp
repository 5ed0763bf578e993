#pragma once

// Fixed-parameter interval rule on counts, its translation to a distance on the
// green, and the uniform-prior posterior it is contrasted with.

#include <cstdint>
#include <optional>
#include <vector>

#include "bayestable/exactprob.hpp"
#include "bayestable/units.hpp"

namespace bayestable {

class CountData {
public:
    CountData(std::int64_t n, std::int64_t k);

    std::int64_t n() const noexcept { return n_; }
    std::int64_t k() const noexcept { return k_; }
    std::int64_t q() const noexcept { return n_ - k_; }
    double proportion() const noexcept { return static_cast<double>(k_) / static_cast<double>(n_); }

private:
    std::int64_t n_;
    std::int64_t k_;
};

enum class IntervalConvention {
    // k_lo = min{k : CDF(k) >= alpha/2}, k_hi = min{k : CDF(k) >= 1 - alpha/2};
    // coverage = CDF(k_hi) - CDF(k_lo - 1).
    nonstrict_both,
    // k_lo = max{k : CDF(k) < alpha/2}, k_hi = max{k : CDF(k) <= 1 - alpha/2};
    // coverage = CDF(k_hi) - CDF(k_lo), read literally as Pr(upper) - Pr(lower).
    strict_lower_nonstrict_upper,
};

const char* to_string(IntervalConvention c);
IntervalConvention parse_convention(std::string_view name);

// Equal-tailed count interval. Coverage is always recomputed from the CDF.
class CentralInterval {
public:
    CentralInterval(const BinomialModel& model, std::int64_t k_lo, std::int64_t k_hi, double alpha,
                    IntervalConvention convention = IntervalConvention::nonstrict_both);

    std::int64_t k_lo() const noexcept { return k_lo_; }
    std::int64_t k_hi() const noexcept { return k_hi_; }
    std::int64_t n() const noexcept { return n_; }
    double alpha() const noexcept { return alpha_; }
    IntervalConvention convention() const noexcept { return convention_; }
    const ProbValue& coverage() const noexcept { return coverage_; }

private:
    std::int64_t k_lo_;
    std::int64_t k_hi_;
    std::int64_t n_;
    double alpha_;
    IntervalConvention convention_;
    ProbValue coverage_;
};

CentralInterval central_interval(const BinomialModel& model, double alpha,
                                 IntervalConvention convention = IntervalConvention::nonstrict_both);

// (k_hi - k_lo)/n as an exact fraction of the span.
Rational width_fraction(std::int64_t k_lo, std::int64_t k_hi, std::int64_t n);

// ((k_hi - k_lo)/n) * span, in the span's unit.
Quantity interval_to_distance(const CentralInterval& interval, std::int64_t n, const Quantity& span);
Quantity interval_to_distance(std::int64_t k_lo, std::int64_t k_hi, std::int64_t n, const Quantity& span);

struct PosteriorQuery {
    PosteriorQuery(double lo, double hi);

    double lo;
    double hi;
};

// Uniform-prior posterior mass of theta in (lo, hi) given k of n.
double beta_posterior_prob(const CountData& data, const PosteriorQuery& query);

// Posterior over m equal cells with midpoints (i + 0.5)/m, normalized to 1.
std::vector<double> discrete_posterior(const CountData& data, std::int64_t cells);

// Sum of cell weights whose midpoints fall inside (lo, hi).
double aggregate_cells(const std::vector<double>& posterior, const PosteriorQuery& query);

// Checks a claimed count interval against both readings of "Pr(k)".
struct EndpointReading {
    bool strict;           // false: Pr(k) = P(X <= k); true: Pr(k) = P(X < k)
    ProbValue pr_lower;    // Pr(k_lo)
    ProbValue pr_upper;    // Pr(k_hi)
    bool lower_ok;         // Pr(k_lo) < alpha/2
    bool upper_ok;         // Pr(k_hi) <= 1 - alpha/2
    ProbValue coverage;    // Pr(k_hi) - Pr(k_lo)
    bool coverage_ok;      // coverage rounds to 1 - alpha at whole percent
};

struct EndpointAudit {
    std::int64_t claimed_lo;
    std::int64_t claimed_hi;
    double alpha;
    std::vector<std::pair<std::int64_t, ProbValue>> probes;  // CDF at probe counts
    std::vector<EndpointReading> readings;
    std::vector<CentralInterval> computed;  // one per convention
    ProbValue claimed_inclusive_coverage;   // P(k_lo <= X <= k_hi)

    // True when some convention's computed interval equals the claimed one.
    bool reproduced() const;
};

EndpointAudit audit_endpoints(const BinomialModel& model, std::int64_t claimed_lo, std::int64_t claimed_hi,
                              double alpha, const std::vector<std::int64_t>& probes);

} // namespace bayestable
