#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chancesplit/cli.hpp"

namespace fs = std::filesystem;
using chancesplit::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("chancesplit_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    std::string example1() {
        return file("example1.json", R"({"rows": [["3/5", "1/5", "1/5"], ["1/2", "2/5", "1/10"], ["1/5", "0", "4/5"]]})");
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunPrintsTheMatching) {
    const Result r = invoke({"run", "urc", example1()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out.substr(0, r.out.rfind('}') + 1));
    EXPECT_EQ(j.at("rows")[1], nlohmann::json({"2/5", "1/2", "1/10"}));
    EXPECT_NE(r.out.find("distance"), std::string::npos);
}

TEST_F(CliTest, RunHonoursSequences) {
    const Result id = invoke({"run", "sdc", example1()});
    const Result rev = invoke({"run", "sdc", example1(), "--alpha", "2,1,0"});
    ASSERT_EQ(rev.code, 0) << rev.err;
    EXPECT_NE(id.out, rev.out);
}

TEST_F(CliTest, ParseErrorsExitTwo) {
    EXPECT_EQ(invoke({"run", "urc", file("bad.json", R"({"rows": [["1/2", "1/3"], ["1", "0"]]})")}).code, 2);
    EXPECT_EQ(invoke({"run", "urc", (dir_ / "missing.json").string()}).code, 2);
    EXPECT_EQ(invoke({"run", "serial", example1()}).code, 2);
    EXPECT_EQ(invoke({"bogus"}).code, 2);
    EXPECT_EQ(invoke({"run", "urc", example1(), "--alpha", "0,0,1"}).code, 2);
}

TEST_F(CliTest, UnsupportedSizeExitsThree) {
    EXPECT_EQ(invoke({"run", "except", file("two.json", R"({"rows": [["1", "0"], ["0", "1"]]})")}).code, 3);
}

TEST_F(CliTest, CheckExitCodes) {
    const std::string e1 = example1();
    EXPECT_EQ(invoke({"check", "eff", "urc", e1}).code, 0);
    EXPECT_EQ(invoke({"check", "eff", "equal", e1}).code, 1);
    EXPECT_EQ(invoke({"check", "we", "urc", e1, "--against", "sdc"}).code, 1);
    EXPECT_EQ(invoke({"check", "rm", "urc", e1, "--agent", "2", "--misreport", "0,1,0"}).code, 4);
    EXPECT_EQ(invoke({"check", "sp", "urc", e1, "--agent", "5", "--misreport", "1,0,0"}).code, 2);
}

TEST_F(CliTest, ReplayConfirmsAWitness) {
    const std::string pdc2 = file("pdc2.json", R"({"rows": [["9/10", "1/10"], ["9/10", "1/10"]]})");
    const Result found = invoke({"check", "sp", "pdc", pdc2, "--agent", "0", "--misreport", "1,0"});
    ASSERT_EQ(found.code, 1) << found.err;
    const std::string verdict = file("verdict.json", found.out);
    EXPECT_EQ(invoke({"check", "--replay", verdict}).code, 1);

    auto j = nlohmann::json::parse(found.out);
    j["witness"]["misreport"] = {"9/10", "1/10"};
    EXPECT_EQ(invoke({"check", "--replay", file("tampered.json", j.dump())}).code, 4);
}

TEST_F(CliTest, FuzzFindsSdcEnvy) {
    const Result r = invoke({"fuzz", "sdc", "--properties", "ef", "--samples", "60"});
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_EQ(invoke({"fuzz", "urc", "--properties", "eff,ef", "--fuzz", "n=3,D=6,samples=30,seed=7"}).code, 0);
}

TEST_F(CliTest, ReproAndGen) {
    EXPECT_EQ(invoke({"repro", "example1"}).code, 0);
    EXPECT_EQ(invoke({"repro", "example9"}).code, 2);
    const Result a = invoke({"gen", "--n", "3", "--D", "6", "--seed", "4", "--count", "2"});
    const Result b = invoke({"gen", "--n", "3", "--D", "6", "--seed", "4", "--count", "2"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}).code, 0); }
