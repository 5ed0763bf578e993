#include "bayestable/greensim.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>

#include "json.hpp"

#include "bayestable/error.hpp"
#include "bayestable/philox.hpp"

namespace bayestable {

namespace {

constexpr std::uint64_t wood_slot = std::numeric_limits<std::uint64_t>::max();

Philox4x32::Counter counter_for(std::uint64_t trial, std::int64_t session) {
    const auto s = static_cast<std::uint64_t>(session);
    return {static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
            static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
}

double standard_normal(double u, double v) {
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

double draw_error(const ErrorDistribution& error, const Philox4x32::Counter& bits) {
    const double u = open_unit(bits[0], bits[1]);
    switch (error.kind) {
    case ErrorKind::gaussian: return error.scale_yd * standard_normal(u, open_unit(bits[2], bits[3]));
    case ErrorKind::uniform: return error.scale_yd * (2.0 * u - 1.0);
    case ErrorKind::laplace: {
        const double c = u - 0.5;
        return -error.scale_yd * std::copysign(1.0, c) * std::log1p(-2.0 * std::fabs(c));
    }
    }
    return 0.0;
}

double draw_wood(const WoodDistribution& wood, double rink_width_yd, const Philox4x32::Counter& bits) {
    const double u = open_unit(bits[0], bits[1]);
    switch (wood.kind) {
    case WoodKind::uniform_rink: return wood.bias_yd + (u - 0.5) * rink_width_yd;
    case WoodKind::fixed: return wood.bias_yd;
    case WoodKind::gaussian: return wood.bias_yd + wood.scale_yd * standard_normal(u, open_unit(bits[2], bits[3]));
    }
    return 0.0;
}

void check_scale(double scale, const char* what) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DomainError(std::string(what) + " scale must be positive and finite, got " + std::to_string(scale));
    }
}

} // namespace

void GreenGeometry::validate() const {
    if (rink_width.value <= 0) {
        throw DomainError("rink width must be positive");
    }
    if (convert(rink_width, Unit::yard).value > convert(green_side, Unit::yard).value) {
        throw DomainError("rink width exceeds the green side");
    }
    if (span_ab.value <= 0) {
        throw DomainError("AB span must be positive");
    }
}

double GreenGeometry::rink_width_yd() const {
    return convert(rink_width, Unit::yard).to_double();
}

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::gaussian: return "gaussian";
    case ErrorKind::uniform: return "uniform";
    case ErrorKind::laplace: return "laplace";
    }
    return "?";
}

ErrorKind parse_error_kind(std::string_view name) {
    if (name == "gaussian" || name == "normal") return ErrorKind::gaussian;
    if (name == "uniform") return ErrorKind::uniform;
    if (name == "laplace") return ErrorKind::laplace;
    throw DomainError("unknown error distribution '" + std::string(name) + "'");
}

const char* to_string(WoodKind kind) {
    switch (kind) {
    case WoodKind::uniform_rink: return "uniform";
    case WoodKind::fixed: return "fixed";
    case WoodKind::gaussian: return "gaussian";
    }
    return "?";
}

WoodKind parse_wood_kind(std::string_view name) {
    if (name == "uniform" || name == "uniform-rink") return WoodKind::uniform_rink;
    if (name == "fixed") return WoodKind::fixed;
    if (name == "gaussian" || name == "normal") return WoodKind::gaussian;
    throw DomainError("unknown wood distribution '" + std::string(name) + "'");
}

SessionResult throw_session(const GreenGeometry& geometry, std::int64_t n, const WoodDistribution& wood,
                            const ErrorDistribution& error, std::uint64_t seed, std::int64_t session) {
    geometry.validate();
    if (n < 1) {
        throw DomainError("a session needs at least one throw, got " + std::to_string(n));
    }
    if (session < 0) {
        throw DomainError("session index must be nonnegative, got " + std::to_string(session));
    }
    check_scale(error.scale_yd, "error");
    if (wood.kind == WoodKind::gaussian) {
        check_scale(wood.scale_yd, "wood");
    }

    const Philox4x32 rng(seed);
    const double rink = geometry.rink_width_yd();
    const double wood_pos = draw_wood(wood, rink, rng(counter_for(wood_slot, session)));

    SessionResult result;
    result.records.reserve(static_cast<std::size_t>(n));
    std::int64_t k = 0;
    for (std::int64_t t = 0; t < n; ++t) {
        const double jack = wood_pos + draw_error(error, rng(counter_for(static_cast<std::uint64_t>(t), session)));
        const double offset = jack - wood_pos;
        if (offset == 0.0) {
            throw DomainError("session " + std::to_string(session) + " trial " + std::to_string(t) +
                              ": Jack came to rest level with the Wood");
        }
        ThrowRecord rec;
        rec.session = session;
        rec.trial = t;
        rec.offset_yd = offset;
        rec.side = offset > 0.0 ? Side::right : Side::left;
        rec.out_of_rink = std::fabs(jack) > 0.5 * rink;
        k += rec.side == Side::right ? 1 : 0;
        result.records.push_back(rec);
    }
    result.summary = SessionSummary{session, n, k, wood_pos, seed};
    return result;
}

std::vector<SessionResult> run_sessions(const GreenGeometry& geometry, std::int64_t n, const WoodDistribution& wood,
                                        const ErrorDistribution& error, std::uint64_t seed, std::int64_t count,
                                        unsigned threads) {
    if (count < 1) {
        throw DomainError("need at least one session, got " + std::to_string(count));
    }
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, count));

    std::vector<SessionResult> results(static_cast<std::size_t>(count));
    if (threads == 1) {
        for (std::int64_t s = 0; s < count; ++s) {
            results[static_cast<std::size_t>(s)] = throw_session(geometry, n, wood, error, seed, s);
        }
        return results;
    }

    std::vector<std::exception_ptr> failures(threads);
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::int64_t s = w; s < count; s += threads) {
                        results[static_cast<std::size_t>(s)] = throw_session(geometry, n, wood, error, seed, s);
                    }
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return results;
}

CountData score_sides(std::span<const double> offsets) {
    if (offsets.empty()) {
        throw DomainError("no offsets to score");
    }
    std::int64_t k = 0;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double x = offsets[i];
        if (!std::isfinite(x)) {
            throw RecordError(static_cast<std::int64_t>(i), "offset is not finite");
        }
        if (x == 0.0) {
            throw RecordError(static_cast<std::int64_t>(i), "zero offset leaves the side undefined");
        }
        k += x > 0.0 ? 1 : 0;
    }
    return CountData(static_cast<std::int64_t>(offsets.size()), k);
}

SessionsReport summarize_sessions(std::span<const SessionSummary> sessions, double theta0, double threshold) {
    if (sessions.empty()) {
        throw DomainError("no sessions to summarize");
    }
    SessionsReport report;
    std::int64_t total_n = 0;
    std::int64_t total_k = 0;
    std::int64_t max_n = 0;
    std::int64_t rejections = 0;
    for (const SessionSummary& s : sessions) {
        const CountData data(s.n, s.k);
        report.k_values.push_back(s.k);
        total_n += s.n;
        total_k += s.k;
        max_n = std::max(max_n, s.n);
        report.fits.push_back(fit_counts(data, theta0, threshold));
        rejections += report.fits.back().verdict == FitVerdict::discrepant ? 1 : 0;
    }
    report.k_histogram.assign(static_cast<std::size_t>(max_n + 1), 0);
    for (std::int64_t k : report.k_values) {
        ++report.k_histogram[static_cast<std::size_t>(k)];
    }
    report.pooled_proportion = static_cast<double>(total_k) / static_cast<double>(total_n);
    report.rejection_rate = static_cast<double>(rejections) / static_cast<double>(sessions.size());
    return report;
}

void write_records_csv(std::ostream& out, std::span<const ThrowRecord> records, bool header) {
    if (header) {
        out << "session,trial,offset_yd,side,out_of_rink\n";
    }
    char buf[128];
    for (const ThrowRecord& r : records) {
        std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%c,%d\n", static_cast<long long>(r.session),
                      static_cast<long long>(r.trial), r.offset_yd, r.side == Side::right ? 'R' : 'L',
                      r.out_of_rink ? 1 : 0);
        out << buf;
    }
}

void write_summaries_json(std::ostream& out, std::span<const SessionSummary> summaries) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const SessionSummary& s : summaries) {
        arr.push_back({{"session", s.session},
                       {"n", s.n},
                       {"k", s.k},
                       {"proportion", s.proportion()},
                       {"wood_position_yd", s.wood_position_yd},
                       {"seed", s.seed}});
    }
    out << arr.dump(2) << '\n';
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    for (auto& f : fields) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
    }
    return fields;
}

} // namespace

std::vector<double> read_offsets_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DomainError("offsets file is empty: header row required");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_commas(line);
    std::size_t column = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "offset_yd" || header[i] == "offset") {
            column = i;
            break;
        }
    }
    if (column == header.size()) {
        if (header.size() != 1) {
            throw DomainError("offsets file header has no 'offset_yd' or 'offset' column");
        }
        column = 0;
    }

    std::vector<double> offsets;
    std::int64_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            continue;
        }
        const auto fields = split_commas(line);
        if (column >= fields.size()) {
            throw RecordError(row, "missing offset field");
        }
        std::string_view field = fields[column];
        if (!field.empty() && field.front() == '+') field.remove_prefix(1);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
            throw RecordError(row, "cannot parse offset '" + std::string(field) + "'");
        }
        if (value == 0.0) {
            throw RecordError(row, "zero offset leaves the side undefined");
        }
        offsets.push_back(value);
        ++row;
    }
    return offsets;
}

} // namespace bayestable
