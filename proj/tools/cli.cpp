#include "bayestable/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "bayestable/bayesrule.hpp"
#include "bayestable/error.hpp"
#include "bayestable/gof.hpp"
#include "bayestable/greensim.hpp"
#include "bayestable/units.hpp"

namespace bayestable::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

OutputFormat parse_format(const std::string& name) {
    if (name == "human") return OutputFormat::human;
    if (name == "json") return OutputFormat::json;
    if (name == "csv") return OutputFormat::csv;
    throw DomainError("unknown output format '" + name + "'");
}

std::string default_format() {
    const char* env = std::getenv(format_env_var);
    return env && *env ? std::string(env) : std::string("human");
}

json prob_json(const ProbValue& v) {
    json j;
    j["value"] = v.value;
    j["mode"] = to_string(v.mode);
    if (v.exact) {
        j["exact"] = to_string(*v.exact);
    }
    return j;
}

json quantity_json(const Quantity& q) {
    return json{{"value", q.to_double()}, {"unit", to_string(q.unit)}, {"exact", to_string(q.value)}};
}

// Writes through a sibling temp file; the target only appears on commit().
class AtomicFile {
public:
    explicit AtomicFile(fs::path target) : target_(std::move(target)), temp_(target_) {
        temp_ += ".partial";
        stream_.open(temp_, std::ios::binary | std::ios::trunc);
        if (!stream_) {
            throw std::runtime_error("cannot open '" + temp_.string() + "' for writing");
        }
    }
    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;
    ~AtomicFile() {
        if (!committed_) {
            stream_.close();
            std::error_code ec;
            fs::remove(temp_, ec);
        }
    }

    std::ostream& stream() { return stream_; }

    void commit() {
        stream_.close();
        if (!stream_) {
            throw std::runtime_error("failed writing '" + target_.string() + "'");
        }
        fs::rename(temp_, target_);
        committed_ = true;
    }

private:
    fs::path target_;
    fs::path temp_;
    std::ofstream stream_;
    bool committed_ = false;
};

struct IntervalArgs {
    std::int64_t n = 0;
    std::string theta = "0.5";
    double alpha = 0.05;
    std::string span = "1";
    std::string unit = "perch";
    std::string convention = "nonstrict-both";
    std::int64_t k_lo = -1;
    std::int64_t k_hi = -1;
};

struct FitArgs {
    std::int64_t n = 0;
    std::int64_t k = 0;
    double theta0 = 0.5;
    double threshold = default_lr_threshold;
};

struct PosteriorArgs {
    std::int64_t n = 0;
    std::int64_t k = 0;
    double lo = 0.0;
    double hi = 1.0;
    std::int64_t cells = 0;
};

struct SimulateArgs {
    std::int64_t throws = 156;
    std::int64_t sessions = 1;
    std::string error_dist = "gaussian";
    double error_scale = 1.0;
    std::string wood_dist = "uniform";
    double wood_bias = 0.0;
    double wood_scale = 1.0;
    std::string rink_width = "1";
    std::string rink_unit = "perch";
    std::uint64_t seed = 0;
    double theta0 = 0.5;
    double threshold = default_lr_threshold;
    double alpha = 0.0;
    unsigned threads = 1;
    std::string out;
};

struct ConvertArgs {
    std::string value;
    std::string from;
    std::string to;
};

BinomialModel make_model(std::int64_t n, const std::string& theta_text) {
    return BinomialModel(n, parse_rational(theta_text));
}

void cmd_interval(const IntervalArgs& a, OutputFormat fmt, std::ostream& out) {
    const BinomialModel model = make_model(a.n, a.theta);
    const IntervalConvention convention = parse_convention(a.convention);
    const bool given = a.k_lo >= 0 || a.k_hi >= 0;
    if (given && (a.k_lo < 0 || a.k_hi < 0)) {
        throw DomainError("--k-lo and --k-hi must be given together");
    }
    const CentralInterval interval = given ? CentralInterval(model, a.k_lo, a.k_hi, a.alpha, convention)
                                           : central_interval(model, a.alpha, convention);
    const Quantity span{parse_rational(a.span), parse_unit(a.unit)};
    const Quantity distance = interval_to_distance(interval, a.n, span);
    const Quantity metres = convert(distance, Unit::metre);

    if (fmt == OutputFormat::json) {
        json j;
        j["n"] = a.n;
        j["theta"] = to_string(*model.exact_theta());
        j["alpha"] = a.alpha;
        j["convention"] = to_string(convention);
        j["k_lo"] = interval.k_lo();
        j["k_hi"] = interval.k_hi();
        j["coverage"] = prob_json(interval.coverage());
        j["width_fraction"] = to_string(width_fraction(interval.k_lo(), interval.k_hi(), a.n));
        j["distance"] = quantity_json(distance);
        j["distance_m"] = quantity_json(metres);
        out << j.dump(2) << '\n';
        return;
    }
    if (fmt == OutputFormat::csv) {
        out << "n,theta,alpha,convention,k_lo,k_hi,coverage,distance,unit,distance_m\n";
        out << a.n << ',' << to_string(*model.exact_theta()) << ',' << format_sig(a.alpha, 17) << ','
            << to_string(convention) << ',' << interval.k_lo() << ',' << interval.k_hi() << ','
            << format_sig(interval.coverage().value, 17) << ',' << format_sig(distance.to_double(), 17) << ','
            << to_string(distance.unit) << ',' << format_sig(metres.to_double(), 17) << '\n';
        return;
    }
    out << "interval   (" << interval.k_lo() << ", " << interval.k_hi() << ")  [" << to_string(convention)
        << ", alpha " << format_sig(a.alpha, 6) << "]\n";
    out << "coverage   " << format_sig(interval.coverage().value, 4);
    if (interval.coverage().exact) {
        out << "  (" << to_string(*interval.coverage().exact) << ")";
    }
    out << "\n";
    out << "width      " << to_string(width_fraction(interval.k_lo(), interval.k_hi(), a.n)) << " of the span\n";
    out << "distance   " << format_fixed(distance.to_double(), 2) << ' ' << to_string(distance.unit) << " = "
        << format_fixed(metres.to_double(), 2) << " metre\n";
}

void cmd_fit(const FitArgs& a, OutputFormat fmt, std::ostream& out) {
    const FitReport r = fit_counts(CountData(a.n, a.k), a.theta0, a.threshold);
    if (fmt == OutputFormat::json) {
        json j;
        j["n"] = a.n;
        j["k"] = a.k;
        j["theta0"] = r.theta0;
        j["lr"] = r.lr;
        j["g2"] = r.g2;
        j["p_value"] = r.p_value;
        j["verdict"] = to_string(r.verdict);
        j["threshold"] = r.threshold;
        out << j.dump(2) << '\n';
        return;
    }
    if (fmt == OutputFormat::csv) {
        out << "n,k,theta0,lr,g2,p_value,verdict,threshold\n"
            << a.n << ',' << a.k << ',' << format_sig(r.theta0, 17) << ',' << format_sig(r.lr, 17) << ','
            << format_sig(r.g2, 17) << ',' << format_sig(r.p_value, 17) << ',' << to_string(r.verdict) << ','
            << format_sig(r.threshold, 17) << '\n';
        return;
    }
    out << "counts            " << a.k << " of " << a.n << " (" << format_fixed(static_cast<double>(a.k) / a.n, 3)
        << ")\n";
    out << "likelihood ratio  " << format_sig(r.lr, 2) << "\n";
    out << "G^2               " << format_sig(r.g2, 2) << "\n";
    out << "p-value           " << format_sig(r.p_value, 2) << "\n";
    out << "verdict           " << to_string(r.verdict) << " (LR " << (r.lr < r.threshold ? "<" : ">=") << ' '
        << format_sig(r.threshold, 6) << ")\n";
}

void cmd_posterior(const PosteriorArgs& a, OutputFormat fmt, std::ostream& out) {
    const CountData data(a.n, a.k);
    const PosteriorQuery query(a.lo, a.hi);
    const double prob = beta_posterior_prob(data, query);
    std::optional<double> discrete;
    if (a.cells != 0) {
        discrete = aggregate_cells(discrete_posterior(data, a.cells), query);
    }
    if (fmt == OutputFormat::json) {
        json j;
        j["n"] = a.n;
        j["k"] = a.k;
        j["lo"] = a.lo;
        j["hi"] = a.hi;
        j["probability"] = prob;
        if (discrete) {
            j["cells"] = a.cells;
            j["discrete_probability"] = *discrete;
        }
        out << j.dump(2) << '\n';
        return;
    }
    if (fmt == OutputFormat::csv) {
        out << "n,k,lo,hi,probability,cells,discrete_probability\n"
            << a.n << ',' << a.k << ',' << format_sig(a.lo, 17) << ',' << format_sig(a.hi, 17) << ','
            << format_sig(prob, 17) << ',' << (discrete ? std::to_string(a.cells) : "") << ','
            << (discrete ? format_sig(*discrete, 17) : "") << '\n';
        return;
    }
    out << "P(" << format_sig(a.lo, 6) << " < theta < " << format_sig(a.hi, 6) << " | " << a.k << " of " << a.n
        << ", uniform prior) = " << format_sig(prob, 4) << "\n";
    if (discrete) {
        out << "discrete table, " << a.cells << " cells          = " << format_sig(*discrete, 4) << "\n";
    }
}

void write_histogram(std::ostream& out, const std::vector<std::int64_t>& hist) {
    std::int64_t peak = 0;
    for (auto c : hist) peak = std::max(peak, c);
    if (peak == 0) return;
    for (std::size_t k = 0; k < hist.size(); ++k) {
        if (hist[k] == 0) continue;
        const auto bar = static_cast<std::size_t>((hist[k] * 50 + peak - 1) / peak);
        char label[32];
        std::snprintf(label, sizeof label, "%5zu %7lld ", k, static_cast<long long>(hist[k]));
        out << label << std::string(bar, '#') << '\n';
    }
}

json aggregate_json(const SessionsReport& agg, double threshold) {
    json j;
    j["sessions"] = agg.k_values.size();
    j["pooled_proportion"] = agg.pooled_proportion;
    j["lr_threshold"] = threshold;
    j["rejection_rate"] = agg.rejection_rate;
    j["k_values"] = agg.k_values;
    return j;
}

void cmd_simulate(const SimulateArgs& a, OutputFormat fmt, std::ostream& out) {
    GreenGeometry geometry;
    geometry.rink_width = Quantity{parse_rational(a.rink_width), parse_unit(a.rink_unit)};
    geometry.span_ab = geometry.rink_width;
    geometry.validate();
    const ErrorDistribution error{parse_error_kind(a.error_dist), a.error_scale};
    const WoodDistribution wood{parse_wood_kind(a.wood_dist), a.wood_bias, a.wood_scale};
    const double threshold = a.alpha > 0.0 ? lr_threshold_for_alpha(a.alpha) : a.threshold;

    const std::vector<SessionResult> results =
        run_sessions(geometry, a.throws, wood, error, a.seed, a.sessions, a.threads);
    std::vector<SessionSummary> summaries;
    summaries.reserve(results.size());
    for (const auto& r : results) summaries.push_back(r.summary);
    const SessionsReport agg = summarize_sessions(summaries, a.theta0, threshold);

    if (!a.out.empty()) {
        fs::path csv_path(a.out);
        fs::path json_path = csv_path;
        json_path.replace_extension(".json");
        if (json_path == csv_path) {
            json_path += ".json";
        }
        AtomicFile csv(csv_path);
        write_records_csv(csv.stream(), {}, true);
        for (const auto& r : results) write_records_csv(csv.stream(), r.records, false);
        AtomicFile js(json_path);
        write_summaries_json(js.stream(), summaries);
        csv.commit();
        js.commit();
    }

    if (fmt == OutputFormat::csv) {
        if (a.out.empty()) {
            write_records_csv(out, {}, true);
            for (const auto& r : results) write_records_csv(out, r.records, false);
        }
        return;
    }
    if (fmt == OutputFormat::json) {
        json j;
        std::ostringstream ss;
        write_summaries_json(ss, summaries);
        j["summaries"] = json::parse(ss.str());
        j["aggregate"] = aggregate_json(agg, threshold);
        out << j.dump(2) << '\n';
        return;
    }
    out << "sessions           " << a.sessions << " x " << a.throws << " throws, seed " << a.seed << "\n";
    out << "error              " << to_string(error.kind) << ", scale " << format_sig(error.scale_yd, 6) << " yd\n";
    out << "pooled proportion  " << format_fixed(agg.pooled_proportion, 3) << "\n";
    out << "rejection rate     " << format_fixed(agg.rejection_rate, 3) << " (LR >= " << format_sig(threshold, 4)
        << ")\n";
    out << "distribution of k\n";
    write_histogram(out, agg.k_histogram);
    if (!a.out.empty()) {
        out << "wrote " << a.out << "\n";
    }
}

void cmd_score(const std::string& path, double theta0, OutputFormat fmt, std::ostream& out) {
    std::vector<double> offsets;
    if (path == "-") {
        offsets = read_offsets_csv(std::cin);
    } else {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open '" + path + "'");
        }
        offsets = read_offsets_csv(in);
    }
    const CountData data = score_sides(offsets);
    const FitReport fit = fit_counts(data, theta0);
    if (fmt == OutputFormat::json) {
        json j;
        j["n"] = data.n();
        j["k"] = data.k();
        j["q"] = data.q();
        j["proportion"] = data.proportion();
        j["lr"] = fit.lr;
        j["g2"] = fit.g2;
        j["p_value"] = fit.p_value;
        j["verdict"] = to_string(fit.verdict);
        out << j.dump(2) << '\n';
        return;
    }
    if (fmt == OutputFormat::csv) {
        out << "n,k,q,proportion\n"
            << data.n() << ',' << data.k() << ',' << data.q() << ',' << format_sig(data.proportion(), 17) << '\n';
        return;
    }
    out << "throws  " << data.n() << "\nright   " << data.k() << "\nleft    " << data.q() << "\nproportion "
        << format_fixed(data.proportion(), 3) << "\n";
}

void cmd_convert(const ConvertArgs& a, OutputFormat fmt, std::ostream& out) {
    const Quantity q{parse_rational(a.value), parse_unit(a.from)};
    const Quantity r = convert(q, parse_unit(a.to));
    if (fmt == OutputFormat::json) {
        out << quantity_json(r).dump(2) << '\n';
        return;
    }
    if (fmt == OutputFormat::csv) {
        out << "value,unit,exact\n" << format_sig(r.to_double(), 17) << ',' << to_string(r.unit) << ','
            << to_string(r.value) << '\n';
        return;
    }
    out << format_sig(r.to_double(), 12) << ' ' << to_string(r.unit) << '\n';
}

void cmd_reproduce(OutputFormat fmt, std::ostream& out) {
    const ReproduceReport report = build_reproduce_report();
    if (fmt == OutputFormat::json) {
        out << to_json(report).dump(2) << '\n';
        return;
    }
    if (fmt == OutputFormat::csv) {
        out << "quantity,computed,printed,status\n";
        for (const auto& l : report.lines) {
            out << '"' << l.quantity << "\",\"" << l.computed << "\",\"" << l.printed << "\","
                << (l.matched ? "matched" : "unmatched") << '\n';
        }
        return;
    }
    render_human(out, report);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fixed-parameter binomial model of targeted throws on a bowling green", "bayestable"};
    app.require_subcommand(1, 1);
    std::string format = default_format();
    app.add_option("--format", format, "Output format (human|json|csv); default from " + std::string(format_env_var))
        ->check(CLI::IsMember({"human", "json", "csv"}));

    IntervalArgs ia;
    auto* interval = app.add_subcommand("interval", "Equal-tailed count interval and its width on the green");
    interval->add_option("--n", ia.n, "Throws")->required()->check(CLI::PositiveNumber);
    interval->add_option("--theta", ia.theta, "Success chance (decimal or ratio)")->capture_default_str();
    interval->add_option("--alpha", ia.alpha, "Total tail budget")->capture_default_str();
    interval->add_option("--span", ia.span, "AB span length")->capture_default_str();
    interval->add_option("--unit", ia.unit, "Span unit")->capture_default_str();
    interval->add_option("--convention", ia.convention, "nonstrict-both | strict-lower/nonstrict-upper")->capture_default_str();
    interval->add_option("--k-lo", ia.k_lo, "Evaluate a given lower endpoint");
    interval->add_option("--k-hi", ia.k_hi, "Evaluate a given upper endpoint");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Likelihood-ratio fit to a fixed-chance binomial");
    fit->add_option("--n", fa.n, "Throws")->required();
    fit->add_option("--k", fa.k, "Passes to the right")->required();
    fit->add_option("--theta0", fa.theta0, "Null chance")->capture_default_str();
    fit->add_option("--lr-threshold", fa.threshold, "LR cutoff for the verdict")->capture_default_str();

    PosteriorArgs pa;
    auto* posterior = app.add_subcommand("posterior", "Uniform-prior posterior probability of an interval");
    posterior->add_option("--n", pa.n, "Throws")->required();
    posterior->add_option("--k", pa.k, "Passes to the right")->required();
    posterior->add_option("--lo", pa.lo, "Lower bound")->required();
    posterior->add_option("--hi", pa.hi, "Upper bound")->required();
    posterior->add_option("--cells", pa.cells, "Also enumerate a table of this many cells");

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo of throwing sessions");
    simulate->add_option("--throws", sa.throws, "Throws per session")->capture_default_str();
    simulate->add_option("--sessions", sa.sessions, "Number of sessions")->capture_default_str();
    simulate->add_option("--error-dist", sa.error_dist, "gaussian | uniform | laplace")->capture_default_str();
    simulate->add_option("--error-scale", sa.error_scale, "Error scale in yards")->capture_default_str();
    simulate->add_option("--wood-dist", sa.wood_dist, "uniform | fixed | gaussian")->capture_default_str();
    simulate->add_option("--wood-bias", sa.wood_bias, "Wood bias offset in yards")->capture_default_str();
    simulate->add_option("--wood-scale", sa.wood_scale, "Wood spread for gaussian, yards")->capture_default_str();
    simulate->add_option("--rink-width", sa.rink_width, "Rink width")->capture_default_str();
    simulate->add_option("--rink-unit", sa.rink_unit, "Rink width unit")->capture_default_str();
    simulate->add_option("--seed", sa.seed, "64-bit seed")->required();
    simulate->add_option("--theta0", sa.theta0, "Null chance for per-session fits")->capture_default_str();
    simulate->add_option("--lr-threshold", sa.threshold, "LR cutoff for per-session verdicts")->capture_default_str();
    simulate->add_option("--alpha", sa.alpha, "Use the LR cutoff equivalent to a G^2 test at this level");
    simulate->add_option("--threads", sa.threads, "Worker threads (0 = all cores)")->capture_default_str();
    simulate->add_option("--out", sa.out, "Records CSV path; summaries go to the same stem with .json");

    std::string score_in;
    double score_theta0 = 0.5;
    auto* score = app.add_subcommand("score", "Count right-side passes in an offsets CSV");
    score->add_option("--in", score_in, "CSV with an offset_yd column ('-' for stdin)")->required();
    score->add_option("--theta0", score_theta0, "Null chance for the fit")->capture_default_str();

    ConvertArgs ca;
    auto* conv = app.add_subcommand("convert", "Convert between perch, yard, foot and metre");
    conv->add_option("--value", ca.value, "Value (decimal or ratio)")->required();
    conv->add_option("--from", ca.from, "Source unit")->required();
    conv->add_option("--to", ca.to, "Target unit")->required();

    auto* reproduce = app.add_subcommand("reproduce", "Recompute the worked example and flag mismatches");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        const OutputFormat fmt = parse_format(format);
        if (interval->parsed()) cmd_interval(ia, fmt, out);
        else if (fit->parsed()) cmd_fit(fa, fmt, out);
        else if (posterior->parsed()) cmd_posterior(pa, fmt, out);
        else if (simulate->parsed()) cmd_simulate(sa, fmt, out);
        else if (score->parsed()) cmd_score(score_in, score_theta0, fmt, out);
        else if (conv->parsed()) cmd_convert(ca, fmt, out);
        else if (reproduce->parsed()) cmd_reproduce(fmt, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace bayestable::cli
