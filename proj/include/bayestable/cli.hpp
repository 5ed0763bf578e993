#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace bayestable::cli {

enum class OutputFormat { human, json, csv };

// Environment variable consulted for the default --format.
inline constexpr const char* format_env_var = "BAYESTABLE_FORMAT";

// Runs one subcommand. args excludes the program name. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// One row of the printed-vs-computed comparison.
struct ReproLine {
    std::string quantity;
    std::string computed;  // as displayed
    std::string printed;   // value as printed in the worked example
    bool matched = false;
    std::string detail;    // full-precision or exact value
};

struct ReproduceReport {
    std::vector<ReproLine> lines;
    nlohmann::ordered_json cdf_probes;  // exact CDF values at the probe counts
    nlohmann::ordered_json intervals;   // computed interval per convention
    nlohmann::ordered_json readings;    // the claimed (66, 85) under each Pr(k) reading
};

// Deterministic: no random source is touched.
ReproduceReport build_reproduce_report();

void render_human(std::ostream& out, const ReproduceReport& report);
nlohmann::ordered_json to_json(const ReproduceReport& report);

} // namespace bayestable::cli
