#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "bayestable/bayesrule.hpp"
#include "bayestable/error.hpp"

using namespace bayestable;

namespace {

BinomialModel half(std::int64_t n) { return BinomialModel(n, Rational(1, 2)); }

// Frozen from Python fractions partial sums of C(156,j)/2^156.
const Rational kCov66to90(BigInt("21808797714393789308783425179029211157669035245"),
                          BigInt("22835963083295358096932575511191922182123945984"));
const Rational kCdf89minus65(BigInt("10788925331047949148586708710904328027312904285"),
                             BigInt("11417981541647679048466287755595961091061972992"));

} // namespace

TEST(CountData, Validates) {
    const CountData d(156, 73);
    EXPECT_EQ(d.q(), 83);
    EXPECT_NEAR(d.proportion(), 0.468, 5e-4);
    EXPECT_THROW(CountData(0, 0), DomainError);
    EXPECT_THROW(CountData(5, 6), DomainError);
    EXPECT_THROW(CountData(5, -1), DomainError);
}

TEST(CentralInterval, TwoPointSupport) {
    const CentralInterval ci = central_interval(half(1), 0.5);
    EXPECT_EQ(ci.k_lo(), 0);
    EXPECT_EQ(ci.k_hi(), 1);
    EXPECT_EQ(*ci.coverage().exact, Rational(1));
}

TEST(CentralInterval, ExactScanAt156) {
    const CentralInterval ci = central_interval(half(156), 0.05);
    EXPECT_EQ(ci.k_lo(), 66);
    EXPECT_EQ(ci.k_hi(), 90);
    EXPECT_EQ(*ci.coverage().exact, kCov66to90);
    EXPECT_GE(ci.coverage().value, 0.95);

    const CentralInterval strict = central_interval(half(156), 0.05, IntervalConvention::strict_lower_nonstrict_upper);
    EXPECT_EQ(strict.k_lo(), 65);
    EXPECT_EQ(strict.k_hi(), 89);
    EXPECT_EQ(*strict.coverage().exact, kCdf89minus65);
}

TEST(CentralInterval, FloatModeAgrees) {
    const CentralInterval ci = central_interval(half(156).as_float(), 0.05);
    EXPECT_EQ(ci.k_lo(), 66);
    EXPECT_EQ(ci.k_hi(), 90);
    EXPECT_FALSE(ci.coverage().exact);
    EXPECT_NEAR(ci.coverage().value, to_double(kCov66to90), 1e-13);
}

TEST(CentralInterval, CoverageIsRecomputedFromCdf) {
    for (std::int64_t n : {3, 20, 156, 400}) {
        for (double alpha : {0.01, 0.05, 0.2}) {
            const BinomialModel model(n, Rational(2, 5));
            const CentralInterval ci = central_interval(model, alpha);
            const Rational expect = *binom_cdf(model, ci.k_hi()).exact -
                                    (ci.k_lo() > 0 ? *binom_cdf(model, ci.k_lo() - 1).exact : Rational(0));
            EXPECT_EQ(*ci.coverage().exact, expect);
            EXPECT_GE(ci.coverage().value, 1.0 - alpha);
        }
    }
}

TEST(CentralInterval, RejectsBadInput) {
    EXPECT_THROW(central_interval(half(10), 0.0), DomainError);
    EXPECT_THROW(central_interval(half(10), 1.0), DomainError);
    EXPECT_THROW(CentralInterval(half(10), 6, 5, 0.05), DomainError);
    EXPECT_THROW(CentralInterval(half(10), 0, 11, 0.05), DomainError);
}

TEST(CentralInterval, ShrinkingAlphaNeverNarrows) {
    std::mt19937_64 gen(13);
    std::uniform_int_distribution<std::int64_t> n_dist(1, 400);
    std::uniform_int_distribution<int> num_dist(1, 19);
    for (int trial = 0; trial < 30; ++trial) {
        const BinomialModel model(n_dist(gen), Rational(num_dist(gen), 20));
        for (auto conv : {IntervalConvention::nonstrict_both, IntervalConvention::strict_lower_nonstrict_upper}) {
            std::int64_t prev_lo = -1;
            std::int64_t prev_hi = model.n() + 1;
            for (double alpha : {0.9, 0.5, 0.3, 0.2, 0.1, 0.05, 0.01, 0.001}) {
                const CentralInterval ci = central_interval(model, alpha, conv);
                if (prev_lo >= 0) {
                    EXPECT_LE(ci.k_lo(), prev_lo);
                    EXPECT_GE(ci.k_hi(), prev_hi);
                }
                prev_lo = ci.k_lo();
                prev_hi = ci.k_hi();
            }
        }
    }
}

TEST(CentralInterval, SymmetricEndpointsAtHalf) {
    for (std::int64_t n = 1; n <= 300; n += 7) {
        for (double alpha : {0.05, 0.1, 0.01}) {
            const BinomialModel model = half(n);
            const auto cdf = exact_cdf_table(model);
            const Rational tail = from_double(alpha) / 2;
            if (std::find(cdf.begin(), cdf.end(), tail) != cdf.end()) continue;
            const CentralInterval ci = central_interval(model, alpha);
            EXPECT_EQ(ci.k_lo() + ci.k_hi(), n) << n << " " << alpha;
        }
    }
}

TEST(IntervalDistance, PrintedEndpointsGiveExactWidth) {
    const Quantity perch = interval_to_distance(66, 85, 156, Quantity{Rational(1), Unit::perch});
    EXPECT_EQ(perch.unit, Unit::perch);
    EXPECT_EQ(perch.value, Rational(19, 156));
    EXPECT_EQ(format_fixed(perch.to_double(), 2), "0.12");
    const Quantity m = convert(perch, Unit::metre);
    EXPECT_EQ(m.value, Rational(79629, 130000));
    EXPECT_NEAR(m.to_double(), 0.6125307692307692, 1e-15);
    EXPECT_EQ(format_fixed(m.to_double(), 2), "0.61");
}

TEST(IntervalDistance, EmptyWidthIsZero) {
    EXPECT_EQ(interval_to_distance(40, 40, 90, Quantity{Rational(7, 3), Unit::yard}).value, Rational(0));
    const CentralInterval ci(half(10), 5, 5, 0.5);
    EXPECT_EQ(interval_to_distance(ci, 10, Quantity{Rational(1), Unit::perch}).value, Rational(0));
}

TEST(IntervalDistance, LinearInSpanAndUnitInvariant) {
    const CentralInterval ci = central_interval(half(156), 0.05);
    const Quantity one = interval_to_distance(ci, 156, Quantity{Rational(1), Unit::perch});
    const Quantity three = interval_to_distance(ci, 156, Quantity{Rational(3), Unit::perch});
    EXPECT_EQ(three.value, 3 * one.value);
    const Quantity via_m = convert(convert(one, Unit::metre), Unit::perch);
    EXPECT_EQ(via_m.value, one.value);
    const Quantity yd_span = interval_to_distance(ci, 156, convert(Quantity{Rational(1), Unit::perch}, Unit::yard));
    EXPECT_EQ(convert(yd_span, Unit::perch).value, one.value);
}

TEST(IntervalDistance, RejectsBadInput) {
    EXPECT_THROW(interval_to_distance(1, 2, 10, Quantity{Rational(0), Unit::perch}), DomainError);
    const CentralInterval ci = central_interval(half(10), 0.1);
    EXPECT_THROW(interval_to_distance(ci, 11, Quantity{Rational(1), Unit::perch}), DomainError);
}

TEST(BetaPosterior, ClosedForms) {
    EXPECT_NEAR(beta_posterior_prob(CountData(1, 1), PosteriorQuery(0.0, 1.0)), 1.0, 1e-15);
    // integral of 2t over (0.5, 1)
    EXPECT_NEAR(beta_posterior_prob(CountData(1, 1), PosteriorQuery(0.5, 1.0)), 0.75, 1e-15);
    EXPECT_THROW(PosteriorQuery(0.6, 0.4), DomainError);
    EXPECT_THROW(PosteriorQuery(-0.1, 0.4), DomainError);
}

TEST(DiscretePosterior, HandEnumeration) {
    EXPECT_EQ(discrete_posterior(CountData(156, 73), 1), std::vector<double>{1.0});
    const auto two = discrete_posterior(CountData(1, 1), 2);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_NEAR(two[0], 0.25, 1e-15);
    EXPECT_NEAR(two[1], 0.75, 1e-15);
    EXPECT_THROW(discrete_posterior(CountData(1, 1), 0), DomainError);
}

TEST(DiscretePosterior, SumsToOne) {
    for (std::int64_t m : {1, 3, 10, 999, 10000, 100000}) {
        for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{156, 73}, {5, 0}, {2000, 1999}}) {
            const auto w = discrete_posterior(CountData(n, k), m);
            EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12) << m << " " << n << " " << k;
        }
    }
}

TEST(DiscretePosterior, ConvergesToBetaPosterior) {
    const CountData data(156, 73);
    const PosteriorQuery q(0.4, 0.6);
    const double target = beta_posterior_prob(data, q);
    EXPECT_NEAR(aggregate_cells(discrete_posterior(data, 1000), q), target, 2e-3);

    // Cell-aligned intervals: error shrinks at least like 1/m.
    for (auto [lo, hi] : {std::pair{0.4, 0.6}, {0.3, 0.5}, {0.45, 0.55}}) {
        const PosteriorQuery query(lo, hi);
        const double exact = beta_posterior_prob(data, query);
        for (std::int64_t m : {20, 200, 2000, 20000}) {
            const double err = std::fabs(aggregate_cells(discrete_posterior(data, m), query) - exact);
            EXPECT_LT(err * static_cast<double>(m), 1.0) << lo << " " << hi << " " << m;
        }
    }
}

TEST(EndpointAudit, PrintedInterval) {
    const EndpointAudit audit = audit_endpoints(half(156), 66, 85, 0.05, {65, 66, 85, 90});
    ASSERT_EQ(audit.probes.size(), 4u);
    EXPECT_NEAR(audit.probes[0].second.value, 0.022490082094521916, 1e-16);
    EXPECT_NEAR(audit.probes[1].second.value, 0.03260338677343998, 1e-16);
    EXPECT_NEAR(audit.probes[2].second.value, 0.8851710766728368, 1e-15);
    EXPECT_NEAR(audit.probes[3].second.value, 0.977509917905478, 1e-15);

    ASSERT_EQ(audit.readings.size(), 2u);
    const EndpointReading& le = audit.readings[0];
    EXPECT_FALSE(le.strict);
    EXPECT_TRUE(le.upper_ok);
    EXPECT_FALSE(le.lower_ok);
    EXPECT_FALSE(le.coverage_ok);
    const EndpointReading& lt = audit.readings[1];
    EXPECT_TRUE(lt.upper_ok);
    EXPECT_TRUE(lt.lower_ok);
    EXPECT_FALSE(lt.coverage_ok);
    EXPECT_FALSE(audit.reproduced());
    EXPECT_NEAR(audit.claimed_inclusive_coverage.value, 0.8626809945783148, 1e-15);

    EXPECT_TRUE(audit_endpoints(half(156), 66, 90, 0.05, {}).reproduced());
}
