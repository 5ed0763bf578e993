// Recomputes every number in the worked bowling-green example and compares it
// with the value as printed.

#include <cmath>
#include <iomanip>
#include <ostream>

#include "bayestable/bayesrule.hpp"
#include "bayestable/cli.hpp"
#include "bayestable/gof.hpp"
#include "bayestable/units.hpp"

namespace bayestable::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::int64_t kThrows = 156;
constexpr std::int64_t kPasses = 73;
constexpr std::int64_t kPrintedLo = 66;
constexpr std::int64_t kPrintedHi = 85;
constexpr double kAlpha = 0.05;

std::string interval_text(std::int64_t lo, std::int64_t hi) {
    return "(" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
}

std::string percent_text(double p) {
    return format_fixed(100.0 * p, 0) + "%";
}

ReproLine line(std::string quantity, std::string computed, std::string printed, std::string detail) {
    const bool matched = computed == printed;
    return ReproLine{std::move(quantity), std::move(computed), std::move(printed), matched, std::move(detail)};
}

json prob_json(const ProbValue& v) {
    json j;
    j["value"] = v.value;
    if (v.exact) {
        j["exact"] = to_string(*v.exact);
    }
    return j;
}

} // namespace

ReproduceReport build_reproduce_report() {
    ReproduceReport report;
    const BinomialModel model(kThrows, Rational(1, 2));
    const CountData data(kThrows, kPasses);

    report.lines.push_back(line("proportion p/n", format_fixed(data.proportion(), 3), "0.468",
                                "73/156 = " + format_sig(data.proportion(), 12)));

    const EndpointAudit audit = audit_endpoints(model, kPrintedLo, kPrintedHi, kAlpha, {65, 66, 85, 90});
    report.cdf_probes = json::array();
    for (const auto& [k, cdf] : audit.probes) {
        json p;
        p["k"] = k;
        p["cdf_le"] = prob_json(cdf);
        p["cdf_lt"] = prob_json(binom_cdf(model, k - 1));
        report.cdf_probes.push_back(p);
    }

    report.intervals = json::array();
    for (const CentralInterval& c : audit.computed) {
        report.lines.push_back(line(std::string("interval endpoints, ") + to_string(c.convention()),
                                    interval_text(c.k_lo(), c.k_hi()), interval_text(kPrintedLo, kPrintedHi),
                                    "coverage " + to_string(*c.coverage().exact) + " = " +
                                        format_sig(c.coverage().value, 12)));
        json j;
        j["convention"] = to_string(c.convention());
        j["k_lo"] = c.k_lo();
        j["k_hi"] = c.k_hi();
        j["coverage"] = prob_json(c.coverage());
        report.intervals.push_back(j);
    }

    report.readings = json::array();
    for (const EndpointReading& r : audit.readings) {
        const std::string reading = r.strict ? "Pr(k) = P(X < k)" : "Pr(k) = P(X <= k)";
        report.lines.push_back(line("[Pr(85) <= 0.975] and [Pr(66) < 0.025], " + reading,
                                    (r.upper_ok ? "true" : "false") + std::string(" and ") +
                                        (r.lower_ok ? "true" : "false"),
                                    "true and true",
                                    "Pr(85) = " + format_sig(r.pr_upper.value, 10) +
                                        ", Pr(66) = " + format_sig(r.pr_lower.value, 10)));
        report.lines.push_back(line("Pr(85) - Pr(66), " + reading, percent_text(r.coverage.value),
                                    "95%", to_string(*r.coverage.exact) + " = " + format_sig(r.coverage.value, 12)));
        json j;
        j["reading"] = r.strict ? "P(X<k)" : "P(X<=k)";
        j["pr_lower"] = prob_json(r.pr_lower);
        j["pr_upper"] = prob_json(r.pr_upper);
        j["lower_inequality_holds"] = r.lower_ok;
        j["upper_inequality_holds"] = r.upper_ok;
        j["coverage"] = prob_json(r.coverage);
        j["coverage_rounds_to_95"] = r.coverage_ok;
        report.readings.push_back(j);
    }
    report.lines.push_back(line("interval (66, 85) reproduced by a convention", audit.reproduced() ? "yes" : "no",
                                "yes",
                                "P(66 <= X <= 85) = " + format_sig(audit.claimed_inclusive_coverage.value, 12)));

    const Quantity perch_width =
        interval_to_distance(kPrintedLo, kPrintedHi, kThrows, Quantity{Rational(1), Unit::perch});
    const Quantity metre_width = convert(perch_width, Unit::metre);
    report.lines.push_back(line("(85-66)/156 width, perch", format_fixed(perch_width.to_double(), 2), "0.12",
                                to_string(perch_width.value) + " = " + format_sig(perch_width.to_double(), 12)));
    report.lines.push_back(line("width, metres", format_fixed(metre_width.to_double(), 2), "0.61",
                                to_string(metre_width.value) + " = " + format_sig(metre_width.to_double(), 12)));

    const Quantity one_perch = convert(Quantity{Rational(1), Unit::perch}, Unit::metre);
    report.lines.push_back(line("1 perch in metres", one_perch.value == parse_rational("5.0292") ? "5.0292" :
                                                         format_sig(one_perch.to_double(), 12),
                                "5.0292", to_string(one_perch.value)));
    const Quantity green = convert(Quantity{Rational(10), Unit::perch}, Unit::yard);
    report.lines.push_back(line("10 perch in yards", to_string(green.value), "55", to_string(green.value)));

    const FitReport fit = fit_counts(data, 0.5, default_lr_threshold);
    report.lines.push_back(line("likelihood ratio", format_sig(fit.lr, 2), "1.4", format_sig(fit.lr, 12)));
    report.lines.push_back(line("G^2 = 2 ln(LR)", format_sig(fit.g2, 2), "0.64", format_sig(fit.g2, 12)));
    report.lines.push_back(line("p-value, chi-square 1 df", format_sig(fit.p_value, 2), "0.42",
                                format_sig(fit.p_value, 12)));
    report.lines.push_back(line("LR < 5 (just as likely as 0.5)", fit.lr < 5.0 ? "true" : "false", "true",
                                std::string("verdict ") + to_string(fit.verdict)));

    const MapDistance map = map_distance(parse_rational("19.7"));
    report.lines.push_back(line("19.7 perch map distance, metres", format_sig(map.display, 3), "98.8",
                                to_string(map.metres.value) + " = " + format_sig(map.metres.to_double(), 12)));
    return report;
}

void render_human(std::ostream& out, const ReproduceReport& report) {
    out << "Binomial(156, 1/2), 73 passes in 156 throws\n\n";
    out << std::left << std::setw(60) << "quantity" << std::setw(16) << "computed" << std::setw(16) << "printed"
        << "status\n";
    for (const ReproLine& l : report.lines) {
        out << std::setw(60) << l.quantity << std::setw(16) << l.computed << std::setw(16) << l.printed
            << (l.matched ? "matched" : "UNMATCHED") << "\n"
            << "    " << l.detail << "\n";
    }
    out << "\nexact CDF values, Binomial(156, 1/2)\n";
    for (const auto& p : report.cdf_probes) {
        out << "  P(X <= " << p["k"].get<std::int64_t>() << ") = " << p["cdf_le"]["exact"].get<std::string>()
            << "\n      = " << format_sig(p["cdf_le"]["value"].get<double>(), 15) << "\n";
    }
}

json to_json(const ReproduceReport& report) {
    json j;
    j["lines"] = json::array();
    for (const ReproLine& l : report.lines) {
        j["lines"].push_back({{"quantity", l.quantity},
                              {"computed", l.computed},
                              {"printed", l.printed},
                              {"matched", l.matched},
                              {"detail", l.detail}});
    }
    j["cdf_probes"] = report.cdf_probes;
    j["intervals"] = report.intervals;
    j["readings"] = report.readings;
    return j;
}

} // namespace bayestable::cli
