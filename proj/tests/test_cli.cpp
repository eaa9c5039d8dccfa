#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"

using elkies::cli::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = elkies::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

json invoke_json(std::vector<std::string> args, int expected_code = 0) {
    args.insert(args.begin(), {"--format", "json"});
    const auto r = invoke(args);
    EXPECT_EQ(r.code, expected_code) << r.err;
    return json::parse(r.out);
}

}  // namespace

TEST(Cli, HelpExitsZero) {
    const auto r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("classify"), std::string::npos);
    EXPECT_NE(r.out.find("audit-thm1"), std::string::npos);
}

TEST(Cli, ParseErrorsExitTwo) {
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"classify", "--q", "7"}).code, 2);
    EXPECT_EQ(invoke({"--format", "xml", "tables"}).code, 2);
    EXPECT_EQ(invoke({"classify", "--q", "7", "--t", "x", "--lmax", "20"}).code, 2);
}

TEST(Cli, InvalidMathematicalInputExitsTwo) {
    EXPECT_EQ(invoke({"classify", "--q", "7", "--t", "6", "--lmax", "20"}).code, 2);  // Hasse
    EXPECT_EQ(invoke({"classify", "--q", "12", "--t", "1", "--lmax", "20"}).code, 2);
    EXPECT_EQ(invoke({"curve", "--p", "15", "--a", "1", "--b", "1"}).code, 2);
    const auto r = invoke({"explicit", "--x", "100", "--zeros", "/nonexistent"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, ClassifyJson) {
    const auto doc = invoke_json({"classify", "--q", "7", "--t", "3", "--lmax", "20"});
    EXPECT_EQ(doc["D"], -19);
    const auto& rows = doc["rows"];
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0]["ell"], 2);
    EXPECT_EQ(rows[0]["class"], "AtkinInert");
    EXPECT_EQ(rows[3]["ell"], 7);
    EXPECT_EQ(rows[3]["class"], "ExcludedChar");
    EXPECT_EQ(rows[7]["ell"], 19);
    EXPECT_EQ(rows[7]["class"], "AtkinRamified");
}

TEST(Cli, ClassifyCsvHasHeader) {
    const auto r = invoke({"--format", "csv", "classify", "--q", "7", "--t", "3", "--lmax", "20"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "ell,class");
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 9);
}

TEST(Cli, LeastAndMissingElkiesPrime) {
    EXPECT_EQ(invoke_json({"least", "--q", "41", "--t", "1"})["least_elkies"], 43);
    const auto none = invoke_json({"least", "--q", "41", "--t", "1", "--cutoff", "40"}, 1);
    EXPECT_TRUE(none["least_elkies"].is_null());
    EXPECT_EQ(none["found"], false);
}

TEST(Cli, CurveWorkedExample) {
    const auto doc = invoke_json({"curve", "--p", "5", "--a", "1", "--b", "1"});
    EXPECT_EQ(doc["points"], 9);
    EXPECT_EQ(doc["t"], -3);
    EXPECT_EQ(doc["D"], -11);
}

TEST(Cli, LargeIntegersSerialiseAsStrings) {
    const auto doc = invoke_json({"least", "--q", "618970019642690137449562111", "--t", "1"});
    EXPECT_TRUE(doc["q"].is_string());
    EXPECT_EQ(doc["q"], "618970019642690137449562111");
    EXPECT_TRUE(doc["found"].get<bool>());
}

TEST(Cli, SumsReportsTheDecomposition) {
    const auto doc = invoke_json({"sums", "--q", "5", "--t", "-3", "--x", "10"});
    EXPECT_NEAR(doc["S"].get<double>(), 0.822576870211, 1e-11);
    EXPECT_NEAR(doc["S1"].get<double>(), -3.37641732076, 1e-10);
    EXPECT_NEAR(doc["S2"].get<double>(), 3.14749511657, 1e-10);
    EXPECT_NEAR(doc["S3"].get<double>(), 1.05149907441, 1e-10);
    EXPECT_EQ(doc["passed"], true);
}

TEST(Cli, DiscAuditFailsOnKnownViolations) {
    const auto doc = invoke_json({"disc-audit"}, 1);
    EXPECT_EQ(doc["violations"], 4);
    EXPECT_EQ(doc["worst_least"], 43);
    EXPECT_EQ(doc["worst_least_D"], -1848);
    EXPECT_EQ(invoke({"disc-audit", "--cutoff", "44"}).code, 0);
}

TEST(Cli, AuditWarnsOnStderrUnlessQuiet) {
    const auto loud = invoke({"--format", "json", "audit-thm1", "--q", "1000000000"});
    EXPECT_EQ(loud.code, 0);
    EXPECT_FALSE(loud.err.empty());
    const auto doc = json::parse(loud.out);
    EXPECT_NEAR(doc["rhs_paper"].get<double>(), 48.1463834967, 1e-9);
    EXPECT_EQ(doc["chain_holds"], true);
    const auto quiet = invoke({"--quiet", "audit-thm1", "--q", "1000000000"});
    EXPECT_TRUE(quiet.err.empty());
}

TEST(Cli, TablesReportC1Diffs) {
    const auto doc = invoke_json({"tables", "--which", "1"});
    EXPECT_EQ(doc["diff_count"], 7);
    EXPECT_EQ(doc["exact_match"], true);
    const auto c2 = invoke_json({"tables", "--which", "2"});
    EXPECT_EQ(c2["diff_count"], 0);
}

TEST(Cli, ExplicitFormulaWithinCertificate) {
    const auto doc = invoke_json({"explicit", "--x", "100"});
    EXPECT_NEAR(doc["error"].get<double>(), 0.00303651115406, 1e-8);
    EXPECT_EQ(doc["within_tail_bound"], true);
    EXPECT_EQ(doc["zeros_used"], 100);
}

TEST(Cli, ScanIsDeterministicAcrossJobCounts) {
    const std::vector<std::string> base = {"scan", "--q-min", "1000", "--q-max", "200000", "--sample", "40",
                                           "--seed", "17"};
    auto one = base, four = base;
    one.insert(one.begin(), {"--format", "json", "--jobs", "1"});
    four.insert(four.begin(), {"--format", "json", "--jobs", "4"});
    const auto a = invoke(one), b = invoke(four);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(invoke(one).out, a.out);
    EXPECT_EQ(json::parse(a.out)["counterexamples"], 0);
}

TEST(Cli, TextOutputIsReadable) {
    const auto r = invoke({"curve", "--p", "5", "--a", "1", "--b", "1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("points: 9"), std::string::npos);
}
