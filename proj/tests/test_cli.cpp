#include "json.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
};

// Runs the CLI with stderr folded into the captured output.
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string("'") + GREYLIFT_CLI_PATH + "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

nlohmann::json summary(const std::string& out) { return nlohmann::json::parse(out.substr(0, out.find('\n'))); }

}  // namespace

TEST(Cli, EvalMittagLeffler) {
    const RunResult r = run_cli("eval ml --beta 0.5 --z -1");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NEAR(summary(r.out)["value"].get<double>(), 0.4275836, 5e-8);
}

TEST(Cli, EvalOtherFunctions) {
    EXPECT_NEAR(summary(run_cli("eval mwright --beta 0.5 --x 1").out)["value"].get<double>(), 0.4393912894, 1e-10);
    EXPECT_NEAR(summary(run_cli("eval gml --beta 1 --rho 2 --z 1").out)["value"].get<double>(), 1.7182818285, 1e-9);
    EXPECT_NEAR(summary(run_cli("eval mwright2 --beta 0.5 --x 0 --t 4").out)["value"].get<double>(), 0.1410473959,
                1e-10);
    EXPECT_EQ(run_cli("eval mwright-d --beta 0.5 --d 2 --y 0.1,0.2 --t 1").code, 0);
}

TEST(Cli, AlphaOutOfRangeIsArgumentError) {
    const RunResult r = run_cli("ggbm --beta 0.5 --alpha 2.5 --paths 10");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("alpha"), std::string::npos);
    EXPECT_NE(r.out.find("(0,2)"), std::string::npos);
}

TEST(Cli, ParseErrorsAreArgumentErrors) {
    EXPECT_EQ(run_cli("").code, 2);
    EXPECT_EQ(run_cli("fbm --hurst abc").code, 2);
    EXPECT_EQ(run_cli("fbm --hurst 0.3 --method euler").code, 2);
    EXPECT_EQ(run_cli("lift --hurst 0.5 --paths 10").code, 2);
}

TEST(Cli, NumericalFailureNamesOperation) {
    const RunResult r = run_cli("law density --beta 0.5 --alpha 1 --times 0 --values 0");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("law density"), std::string::npos);
}

TEST(Cli, LawQueries) {
    const double c = summary(run_cli("law char --beta 0.5 --alpha 0.5 --times 1 --values 1").out)["value"];
    EXPECT_NEAR(c, std::exp(0.25) * std::erfc(0.5), 1e-12);
    const RunResult ou = run_cli("law grey-ou-char --beta 0.5 --x 1 --t 1 --regime rough --values 1.4142135623730951");
    EXPECT_NEAR(summary(ou.out)["value"].get<double>(), 0.6521, 1e-4);
    const RunResult d = run_cli("law grey-ou-density --beta 0.5 --x 1 --values 0.3");
    ASSERT_EQ(d.code, 0);
    EXPECT_TRUE(summary(d.out).contains("quadrature_residual"));
    EXPECT_EQ(summary(d.out)["query"]["x"], 1.0);
}

TEST(Cli, WritesCsvAndSidecar) {
    const fs::path dir = fs::temp_directory_path() / "greylift_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path csv = dir / "g.csv";
    const RunResult r = run_cli("ggbm --beta 0.5 --alpha 0.5 --n-steps 4 --paths 3 --seed 2 --out '" + csv.string() + "'");
    ASSERT_EQ(r.code, 0) << r.out;
    ASSERT_TRUE(fs::exists(csv));
    ASSERT_TRUE(fs::exists(dir / "g.csv.meta.json"));
    EXPECT_EQ(summary(r.out)["out"], csv.string());
    fs::remove_all(dir);
}

TEST(Cli, VerifyPassesAndCorruptedHookFails) {
    EXPECT_EQ(run_cli("verify --beta 0.5 --alpha 1.0 --paths 100000 --seed 1").code, 0);
    const RunResult bad = run_cli("verify --beta 0.5 --alpha 1.0 --paths 100000 --seed 1 --hook corrupted-y");
    EXPECT_EQ(bad.code, 1);
    EXPECT_FALSE(summary(bad.out)["pass"].get<bool>());
}

TEST(Cli, LiftReportsCovarianceError) {
    const RunResult r = run_cli("lift --hurst 0.75 --nodes 60 --xmin 1e-3 --xmax 1e3 --n-steps 4 --paths 50 --report-cov-error");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto s = summary(r.out);
    EXPECT_EQ(s["lift"]["nodes"], 60);
    EXPECT_GT(s["sup_rel_cov_error"].get<double>(), 0.0);
}
