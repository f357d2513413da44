#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <cbnet/cli.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cbnet::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("cbnet_cli_" + std::string(info->name()) + "_" + std::to_string(std::random_device{}()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string alarm_json() const { return (fs::path(CBNET_DATA_DIR) / "alarm.json").string(); }
    std::string alarm_dot() const { return (fs::path(CBNET_DATA_DIR) / "alarm.dot").string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SampleWritesHeaderPlusCases) {
    auto r = run({"sample", "--net", alarm_json(), "--cases", "10000", "--seed", "42", "--out", path("d.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(count_lines(slurp(path("d.csv"))), 10001u);
}

TEST_F(CliTest, SampleToStdoutMatchesFile) {
    ASSERT_EQ(run({"sample", "--net", alarm_json(), "--cases", "20", "--seed", "3", "--out", path("d.csv")}).code, 0);
    auto r = run({"sample", "--net", alarm_json(), "--cases", "20", "--seed", "3"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(path("d.csv")));
}

TEST_F(CliTest, LearnThenCompareAndScore) {
    ASSERT_EQ(run({"sample", "--net", alarm_json(), "--cases", "10000", "--seed", "42", "--out", path("d.csv")}).code,
              0);
    auto learned = run({"learn", "--data", path("d.csv"), "--alpha", "0.1", "--max-degree", "15", "--mode", "total",
                        "--out", path("g.dot"), "--trace"});
    ASSERT_EQ(learned.code, 0) << learned.err;
    EXPECT_TRUE(fs::exists(path("g.dot")));
    EXPECT_NE(learned.out.find("log_score\t"), std::string::npos);
    EXPECT_NE(learned.out.find("max_ord\t"), std::string::npos);
    EXPECT_NE(learned.out.find("termination\t"), std::string::npos);
    EXPECT_NE(learned.out.find("accepted"), std::string::npos);

    auto cmp = run({"compare", "--learned", path("g.dot"), "--gold", alarm_dot()});
    ASSERT_EQ(cmp.code, 0) << cmp.err;
    std::istringstream lines(cmp.out);
    std::map<std::string, long> counts;
    for (std::string key, value; std::getline(lines, key, '\t') && std::getline(lines, value);)
        if (key.find('_') == std::string::npos) counts[key] = std::stol(value);
    EXPECT_EQ(counts["missing"] + counts["reversed"] + counts["correct"], 46);

    auto json_gold = run({"compare", "--learned", path("g.dot"), "--gold", alarm_json()});
    EXPECT_EQ(json_gold.out, cmp.out);

    auto score = run({"score", "--data", path("d.csv"), "--learned", path("g.dot")});
    ASSERT_EQ(score.code, 0) << score.err;
    EXPECT_EQ(score.out.substr(0, 10), "log_score\t");
    EXPECT_NE(learned.out.find(score.out), std::string::npos);
}

TEST_F(CliTest, LearnToStdoutPrefixesTheSummary) {
    std::ofstream(path("d.csv")) << "a,b\n0,0\n1,1\n0,0\n1,1\n0,0\n1,1\n0,0\n1,1\n";
    auto r = run({"learn", "--data", path("d.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("digraph G {\n", 0), 0u);
    EXPECT_NE(r.out.find("}\n// log_score\t"), std::string::npos);
    EXPECT_NE(r.out.find("// termination\t"), std::string::npos);
}

TEST_F(CliTest, IdenticalInvocationsAreByteIdentical) {
    ASSERT_EQ(run({"sample", "--net", alarm_json(), "--cases", "2000", "--seed", "5", "--out", path("d.csv")}).code, 0);
    auto first = run({"learn", "--data", path("d.csv"), "--trace", "--out", path("g1.dot")});
    auto second = run({"learn", "--data", path("d.csv"), "--trace", "--out", path("g2.dot")});
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(slurp(path("g1.dot")), slurp(path("g2.dot")));
}

TEST_F(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"learn"}).code, 2);
    EXPECT_EQ(run({"learn", "--data", path("d.csv"), "--mode", "sideways"}).code, 2);
    EXPECT_EQ(run({"learn", "--data", path("d.csv"), "--alpha", "abc"}).code, 2);
    EXPECT_EQ(run({"sample", "--net", alarm_json(), "--bogus"}).code, 2);
    auto r = run({"frobnicate"});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(count_lines(r.err), 1u);
}

TEST_F(CliTest, BadMaxOrdIsAUsageError) {
    std::ofstream(path("d.csv")) << "a,b\n0,0\n1,1\n";
    EXPECT_EQ(run({"learn", "--data", path("d.csv"), "--max-ord", "3"}).code, 2);
}

TEST_F(CliTest, FileErrorsExitOne) {
    auto missing = run({"learn", "--data", path("nope.csv")});
    EXPECT_EQ(missing.code, 1);
    EXPECT_EQ(count_lines(missing.err), 1u);

    std::ofstream(path("ragged.csv")) << "a,b\n0,1\n0\n";
    auto ragged = run({"learn", "--data", path("ragged.csv")});
    EXPECT_EQ(ragged.code, 1);
    EXPECT_NE(ragged.err.find("row 3"), std::string::npos);

    std::ofstream(path("bad.json")) << "{";
    EXPECT_EQ(run({"sample", "--net", path("bad.json")}).code, 1);
    EXPECT_EQ(run({"compare", "--learned", path("nope.dot"), "--gold", alarm_dot()}).code, 1);
}

TEST_F(CliTest, HelpListsFlagsWithDefaults) {
    auto r = run({"learn", "--help"});
    ASSERT_EQ(r.code, 0);
    for (const char* flag : {"--data", "--schema", "--alpha", "--max-degree", "--max-parents", "--mode", "--max-ord",
                             "--trace", "--out"})
        EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
    EXPECT_NE(r.out.find("0.1"), std::string::npos);
    EXPECT_NE(r.out.find("15"), std::string::npos);
    EXPECT_NE(r.out.find("total"), std::string::npos);

    auto s = run({"sample", "--help"});
    EXPECT_NE(s.out.find("1000"), std::string::npos);
    EXPECT_EQ(run({"--help"}).code, 0);
}
