#pragma once

// Monte Carlo of the tandem setup on a bowling green: one Wood comes to rest at
// a random lateral position, then the Jack is thrown n times at it and each
// throw is scored by the side of the Wood it passes.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "bayestable/bayesrule.hpp"
#include "bayestable/gof.hpp"
#include "bayestable/units.hpp"

namespace bayestable {

struct GreenGeometry {
    Quantity green_side{Rational(10), Unit::perch};
    Quantity rink_width{Rational(1), Unit::perch};
    Quantity span_ab{Rational(1), Unit::perch};

    // Throws DomainError unless 0 < rink_width <= green_side and span_ab > 0.
    void validate() const;
    double rink_width_yd() const;
};

enum class ErrorKind { gaussian, uniform, laplace };

const char* to_string(ErrorKind kind);
ErrorKind parse_error_kind(std::string_view name);

// Symmetric Jack error about the Wood. scale: gaussian sd, uniform half-width,
// laplace b; yards.
struct ErrorDistribution {
    ErrorKind kind = ErrorKind::gaussian;
    double scale_yd = 1.0;
};

enum class WoodKind { uniform_rink, fixed, gaussian };

const char* to_string(WoodKind kind);
WoodKind parse_wood_kind(std::string_view name);

// Wood resting position, measured from the rink centerline. uniform_rink spans
// the rink width; gaussian uses scale_yd as sd; bias_yd shifts any of them.
struct WoodDistribution {
    WoodKind kind = WoodKind::uniform_rink;
    double bias_yd = 0.0;
    double scale_yd = 1.0;
};

enum class Side { left, right };

struct ThrowRecord {
    std::int64_t session = 0;
    std::int64_t trial = 0;
    double offset_yd = 0.0;  // Jack minus Wood, lateral
    Side side = Side::left;
    bool out_of_rink = false;
};

struct SessionSummary {
    std::int64_t session = 0;
    std::int64_t n = 0;
    std::int64_t k = 0;
    double wood_position_yd = 0.0;
    std::uint64_t seed = 0;

    double proportion() const noexcept { return static_cast<double>(k) / static_cast<double>(n); }
};

struct SessionResult {
    std::vector<ThrowRecord> records;
    SessionSummary summary;
};

SessionResult throw_session(const GreenGeometry& geometry, std::int64_t n, const WoodDistribution& wood,
                            const ErrorDistribution& error, std::uint64_t seed, std::int64_t session);

// Runs sessions 0..count-1, fanned out over `threads` workers (0 = hardware).
std::vector<SessionResult> run_sessions(const GreenGeometry& geometry, std::int64_t n, const WoodDistribution& wood,
                                        const ErrorDistribution& error, std::uint64_t seed, std::int64_t count,
                                        unsigned threads = 1);

// Counts strictly positive offsets; a zero offset is a RecordError at its index.
CountData score_sides(std::span<const double> offsets);

struct SessionsReport {
    std::vector<std::int64_t> k_values;
    std::vector<std::int64_t> k_histogram;  // index k, sized max n + 1
    double pooled_proportion = 0.0;
    std::vector<FitReport> fits;
    double rejection_rate = 0.0;  // share of sessions with verdict discrepant
};

SessionsReport summarize_sessions(std::span<const SessionSummary> sessions, double theta0 = 0.5,
                                  double threshold = default_lr_threshold);

// CSV header: session,trial,offset_yd,side,out_of_rink
void write_records_csv(std::ostream& out, std::span<const ThrowRecord> records, bool header = true);
// JSON array of {session, n, k, proportion, wood_position_yd, seed}.
void write_summaries_json(std::ostream& out, std::span<const SessionSummary> summaries);

// Reads offsets from CSV with a header row. Uses the `offset_yd` column (or
// `offset`, or the only column). Errors name the 0-based data row.
std::vector<double> read_offsets_csv(std::istream& in);

} // namespace bayestable
