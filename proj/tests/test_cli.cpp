#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bayestable/cli.hpp"

namespace fs = std::filesystem;
using bayestable::cli::run;
using json = nlohmann::ordered_json;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("bayestable_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST(Cli, FitJson) {
    const Result r = invoke({"--format", "json", "fit", "--n", "156", "--k", "73", "--theta0", "0.5"});
    ASSERT_EQ(r.status, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["lr"].get<double>(), 1.378137138193676, 1e-12);
    EXPECT_NEAR(j["g2"].get<double>(), 0.6414653747477383, 1e-12);
    EXPECT_NEAR(j["p_value"].get<double>(), 0.4231806614014846, 1e-12);
    EXPECT_EQ(j["verdict"], "consistent");
}

TEST(Cli, FitHumanDisplay) {
    const Result r = invoke({"--format", "human", "fit", "--n", "156", "--k", "73"});
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("likelihood ratio  1.4\n"), std::string::npos);
    EXPECT_NE(r.out.find("G^2               0.64\n"), std::string::npos);
    EXPECT_NE(r.out.find("p-value           0.42\n"), std::string::npos);
}

TEST(Cli, Convert) {
    const Result r = invoke({"--format", "json", "convert", "--value", "10", "--from", "perch", "--to", "yard"});
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(json::parse(r.out)["exact"], "55");
    const Result m = invoke({"--format", "csv", "convert", "--value", "1", "--from", "perch", "--to", "metre"});
    EXPECT_NE(m.out.find("12573/2500"), std::string::npos);
    EXPECT_NE(invoke({"convert", "--value", "1", "--from", "perch", "--to", "furlong"}).status, 0);
}

TEST(Cli, IntervalGivenEndpoints) {
    const Result r = invoke(
        {"--format", "json", "interval", "--n", "156", "--k-lo", "66", "--k-hi", "85", "--span", "1"});
    ASSERT_EQ(r.status, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["width_fraction"], "19/156");
    EXPECT_EQ(j["distance_m"]["exact"], "79629/130000");
    const Result h = invoke({"--format", "human", "interval", "--n", "156", "--k-lo", "66", "--k-hi", "85"});
    EXPECT_NE(h.out.find("0.12 perch = 0.61 metre"), std::string::npos) << h.out;
}

TEST(Cli, IntervalComputed) {
    const Result r = invoke({"--format", "json", "interval", "--n", "156"});
    ASSERT_EQ(r.status, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["k_lo"], 66);
    EXPECT_EQ(j["k_hi"], 90);
    EXPECT_NE(invoke({"interval", "--n", "156", "--k-lo", "66"}).status, 0);
}

TEST(Cli, Posterior) {
    const Result r = invoke({"--format", "json", "posterior", "--n", "156", "--k", "73", "--lo", "0.4", "--hi", "0.6",
                             "--cells", "10000"});
    ASSERT_EQ(r.status, 0);
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["probability"].get<double>(), 0.9581293481922137, 1e-12);
    EXPECT_NEAR(j["discrete_probability"].get<double>(), 0.9581293481922137, 2e-4);
}

TEST(Cli, UsageErrors) {
    EXPECT_NE(invoke({"fit", "--n", "156", "--k", "73", "--bogus"}).status, 0);
    EXPECT_NE(invoke({}).status, 0);
    EXPECT_NE(invoke({"fit", "--n", "156"}).status, 0);
    const Result bad = invoke({"fit", "--n", "10", "--k", "11"});
    EXPECT_EQ(bad.status, 1);
    EXPECT_NE(bad.err.find("k=11"), std::string::npos);
    EXPECT_NE(invoke({"fit", "--n", "10", "--k", "3", "--theta0", "1"}).status, 0);
}

TEST(Cli, SimulateIsByteIdentical) {
    const fs::path dir = scratch_dir("determinism");
    const auto args = [&](const std::string& stem) {
        return std::vector<std::string>{"--format", "json", "simulate", "--sessions", "8", "--throws", "156",
                                        "--seed", "2024", "--threads", "3", "--out", (dir / (stem + ".csv")).string()};
    };
    const Result a = invoke(args("a"));
    const Result b = invoke(args("b"));
    ASSERT_EQ(a.status, 0) << a.err;
    ASSERT_EQ(b.status, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
    const std::string csv = slurp(dir / "a.csv");
    EXPECT_EQ(csv, slurp(dir / "b.csv"));
    EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
    EXPECT_EQ(csv.rfind("session,trial,offset_yd,side,out_of_rink\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 8 * 156 + 1);
    EXPECT_EQ(json::parse(slurp(dir / "a.json")).size(), 8u);
    fs::remove_all(dir);
}

TEST(Cli, SimulateFailureLeavesNoFiles) {
    const fs::path dir = scratch_dir("partial");
    const Result r = invoke({"simulate", "--seed", "1", "--error-scale", "0", "--out", (dir / "x.csv").string()});
    EXPECT_EQ(r.status, 1);
    EXPECT_TRUE(fs::is_empty(dir));
    const Result missing = invoke({"simulate", "--seed", "1", "--out", (dir / "no" / "x.csv").string()});
    EXPECT_EQ(missing.status, 1);
    EXPECT_TRUE(fs::is_empty(dir));
    fs::remove_all(dir);
}

TEST(Cli, ScoreRoundTrip) {
    const fs::path dir = scratch_dir("score");
    const Result sim = invoke({"--format", "json", "simulate", "--sessions", "1", "--throws", "40", "--seed", "77",
                               "--out", (dir / "s.csv").string()});
    ASSERT_EQ(sim.status, 0) << sim.err;
    const auto k = json::parse(sim.out)["summaries"][0]["k"].get<std::int64_t>();
    const Result score = invoke({"--format", "json", "score", "--in", (dir / "s.csv").string()});
    ASSERT_EQ(score.status, 0) << score.err;
    EXPECT_EQ(json::parse(score.out)["k"].get<std::int64_t>(), k);

    std::ofstream(dir / "zero.csv") << "offset_yd\n0.5\n0\n";
    const Result zero = invoke({"score", "--in", (dir / "zero.csv").string()});
    EXPECT_EQ(zero.status, 1);
    EXPECT_NE(zero.err.find("record 1"), std::string::npos) << zero.err;
    fs::remove_all(dir);
}

TEST(Cli, ReproduceDeterministic) {
    const Result a = invoke({"--format", "json", "reproduce"});
    const Result b = invoke({"--format", "json", "reproduce"});
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    const json j = json::parse(a.out);
    EXPECT_EQ(j["cdf_probes"].size(), 4u);
    bool saw_verdict = false;
    for (const auto& l : j["lines"]) {
        if (l["quantity"] == "interval (66, 85) reproduced by a convention") {
            saw_verdict = true;
            EXPECT_EQ(l["computed"], "no");
            EXPECT_EQ(l["matched"], false);
        }
    }
    EXPECT_TRUE(saw_verdict);
}

TEST(Cli, FormatFromEnvironment) {
    ::setenv("BAYESTABLE_FORMAT", "json", 1);
    const Result r = invoke({"fit", "--n", "4", "--k", "2"});
    ::unsetenv("BAYESTABLE_FORMAT");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(json::parse(r.out)["lr"], 1.0);
}

TEST(Cli, BinaryRuns) {
    const std::string cmd = std::string(BAYESTABLE_TOOL) + " --format csv convert --value 10 --from perch --to yd";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    char buf[256];
    std::string out;
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    EXPECT_EQ(::pclose(pipe), 0);
    EXPECT_EQ(out, "value,unit,exact\n55,yard,55\n");
}
