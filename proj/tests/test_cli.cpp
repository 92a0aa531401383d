#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cli_runner.hpp"

using nmwit::test::run_cli;
using nmwit::test::strip_timestamp;

namespace {

const std::string kCli = NMWIT_CLI_PATH;
const std::string kSpecs = NMWIT_SPECS_DIR;

std::string spec(const std::string& name) { return kSpecs + "/" + name; }

}  // namespace

TEST(Cli, AnalyzeExitCodes) {
    EXPECT_EQ(run_cli(kCli + " analyze --spec " + spec("dephasing.json")).exit_code, 0);
    const auto nm = run_cli(kCli + " analyze --spec " + spec("dephasing_cos.json") +
                            " --t0 0 --t1 3.2 --steps 320");
    EXPECT_EQ(nm.exit_code, 3);
    const auto j = nlohmann::json::parse(nm.out);
    ASSERT_EQ(j["nm_intervals"].size(), 1u);
    EXPECT_NEAR(j["nm_intervals"][0][0].get<double>(), 1.5708, 0.02);
    EXPECT_EQ(j["nm_intervals"][0][1].get<double>(), 3.2);
    EXPECT_EQ(run_cli(kCli + " analyze --spec " + spec("bad_hamiltonian.json")).exit_code, 1);
    EXPECT_EQ(run_cli(kCli + " analyze --spec /nonexistent.json").exit_code, 1);
    EXPECT_EQ(run_cli(kCli + " analyze --spec " + spec("dephasing.json") + " --eps -1").exit_code, 1);
    EXPECT_EQ(run_cli(kCli + " analyze --spec " + spec("damping_table.json") + " --t1 5").exit_code,
              1);
}

TEST(Cli, CsvMatchesJson) {
    const std::string base = kCli + " analyze --spec " + spec("damping_table.json") +
                             " --t0 0 --t1 3 --steps 30";
    const auto j = nlohmann::json::parse(run_cli(base).out);
    const auto csv = run_cli(base + " --format csv").out;
    std::string expected = "t,min_eigenvalue,deficit,is_markovian\n";
    for (const auto& p : j["points"])
        expected += p["t"].dump() + "," + p["min_eigenvalue"].dump() + "," + p["deficit"].dump() +
                    "," + p["is_markovian"].dump() + "\n";
    EXPECT_EQ(csv, expected);
}

TEST(Cli, WitnessModes) {
    const std::string base = kCli + " witness --spec " + spec("pauli_nm.json") + " --eps 1e-3";
    const auto fixed = run_cli(base + " --mode theorem3-fixed");
    ASSERT_EQ(fixed.exit_code, 0);
    const auto jf = nlohmann::json::parse(fixed.out);
    EXPECT_NEAR(jf["witness"]["expectation_on_cn"].get<double>(), -1.2e-7, 1e-16);
    EXPECT_EQ(jf["witness"]["kind"], "theorem3");

    const auto spectral = nlohmann::json::parse(run_cli(base + " --mode spectral").out);
    EXPECT_NEAR(spectral["witness"]["expectation_on_cn"].get<double>(), -3e-4, 1e-15);

    const auto gksl = run_cli(base + " --mode theorem3-gksl");
    EXPECT_EQ(gksl.exit_code, 0);
    EXPECT_NEAR(nlohmann::json::parse(gksl.out)["residual_squared"].get<double>(), 1.2e-7, 1e-12);

    EXPECT_EQ(run_cli(kCli + " witness --spec " + spec("dephasing.json")).exit_code, 2);
    EXPECT_EQ(run_cli(base + " --max-iter 1").exit_code, 4);
    EXPECT_EQ(run_cli(base + " --mode bogus").exit_code, 1);
}

TEST(Cli, VerifyRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "nmwit_cli_test";
    std::filesystem::create_directories(dir);
    const std::string w = (dir / "w.json").string();
    ASSERT_EQ(run_cli(kCli + " witness --spec " + spec("pauli_nm.json") + " --out " + w).exit_code,
              0);
    const auto ok = run_cli(kCli + " verify --witness " + w + " --n 10000 --seed 1");
    EXPECT_EQ(ok.exit_code, 0);
    EXPECT_EQ(nlohmann::json::parse(ok.out)["violations"], 0);

    nlohmann::json neg;
    neg["matrix"] = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < 4; ++c) row.push_back({r == c ? -1.0 : 0.0, 0.0});
        neg["matrix"].push_back(row);
    }
    const std::string negpath = (dir / "neg.json").string();
    {
        std::ofstream(negpath) << neg.dump();
    }
    const auto bad = run_cli(kCli + " verify --witness " + negpath + " --n 200 --seed 1");
    EXPECT_EQ(bad.exit_code, 3);
    EXPECT_EQ(nlohmann::json::parse(bad.out)["violations"], 200);
    EXPECT_EQ(run_cli(kCli + " verify --witness " + negpath + " --n 0 --seed 1").exit_code, 1);
    EXPECT_EQ(run_cli(kCli + " verify --witness " + negpath + " --n 10").exit_code, 1);

    neg["matrix"][0][1] = {5.0, 0.0};
    {
        std::ofstream(negpath) << neg.dump();
    }
    EXPECT_EQ(run_cli(kCli + " verify --witness " + negpath + " --n 10 --seed 1").exit_code, 1);
    std::filesystem::remove_all(dir);
}

TEST(Cli, GeometryProbes) {
    for (const char* probe : {"convexity", "hsnorm", "extreme", "separation"})
        EXPECT_EQ(run_cli(kCli + " geometry --probe " + probe + " --n 200 --seed 3").exit_code, 0)
            << probe;
    EXPECT_EQ(run_cli(kCli + " geometry --probe bogus --seed 3").exit_code, 1);
    EXPECT_EQ(run_cli(kCli + " geometry --probe separation --n 100 --seed 3 --spec " +
                      spec("dephasing.json"))
                  .exit_code,
              2);
}

TEST(Cli, SeededRunsAreByteIdenticalModuloTimestamp) {
    const std::string cmd = kCli + " geometry --probe convexity --n 500 --seed 42";
    const auto a = run_cli(cmd);
    const auto b = run_cli(cmd);
    EXPECT_EQ(strip_timestamp(a.out), strip_timestamp(b.out));
    EXPECT_NE(strip_timestamp(a.out), strip_timestamp(run_cli(kCli + " geometry --probe convexity "
                                                                      "--n 500 --seed 43")
                                                              .out));
}
