#include <greylift/fbm_exact.hpp>
#include <greylift/greyproc.hpp>
#include <greylift/io.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace greylift;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    fs::path d = fs::temp_directory_path() / ("greylift_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Io, RoundTripIsExact) {
    const fs::path dir = temp_dir();
    const auto ens = ggbm_paths(validate_params(0.5, 0.7), TimeGrid::uniform(1.5, 3), 7, 2, 99);
    const fs::path csv = dir / "paths.csv";
    io::write_ensemble(csv, ens, {{"generator", "test"}});
    ASSERT_TRUE(fs::exists(io::sidecar_path(csv)));
    EXPECT_FALSE(fs::exists(dir / "paths.csv.tmp"));
    const PathEnsemble back = io::read_ensemble(csv);
    EXPECT_EQ(back.values, ens.values);
    EXPECT_EQ(back.grid, ens.grid);
    EXPECT_EQ(back.beta, ens.beta);
    EXPECT_EQ(back.y_values, ens.y_values);
    EXPECT_EQ(back.method, ens.method);
    EXPECT_EQ(back.seed, 99u);
    fs::remove_all(dir);
}

TEST(Io, CsvSchema) {
    const auto ens = fbm_cholesky(0.5, TimeGrid::uniform(1.0, 1), 1, 1, 1);
    const std::string s = io::to_csv(ens);
    EXPECT_EQ(s.substr(0, s.find('\n')), "path_id,t,coord,value");
    EXPECT_NE(s.find("\n0,0,0,0\n"), std::string::npos);
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
}

TEST(Io, MetadataFields) {
    const auto ens = fbm_circulant(0.3, TimeGrid::uniform(1.0, 2), 3, 1, 4);
    const auto m = io::metadata(ens);
    EXPECT_EQ(m["method"], "circulant");
    EXPECT_TRUE(m["beta"].is_null());
    EXPECT_DOUBLE_EQ(m["alpha"].get<double>(), 0.6);
    EXPECT_EQ(m["times"].size(), 3u);
}

TEST(Io, SameInputsGiveIdenticalBytes) {
    const fs::path dir = temp_dir();
    const auto g = TimeGrid::uniform(1.0, 5);
    io::write_ensemble(dir / "a.csv", fbm_circulant(0.7, g, 20, 1, 5));
    io::write_ensemble(dir / "b.csv", fbm_circulant(0.7, g, 20, 1, 5));
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
    fs::remove_all(dir);
}

TEST(Io, MissingSidecarAndBadRows) {
    const fs::path dir = temp_dir();
    std::ofstream(dir / "x.csv") << "path_id,t,coord,value\n";
    EXPECT_THROW(io::read_ensemble(dir / "x.csv"), io::IoError);
    const auto ens = fbm_cholesky(0.5, TimeGrid::uniform(1.0, 1), 1, 1, 1);
    io::write_ensemble(dir / "y.csv", ens);
    std::ofstream(dir / "y.csv", std::ios::app) << "5,0,0,1.0\n";
    EXPECT_THROW(io::read_ensemble(dir / "y.csv"), io::IoError);
    fs::remove_all(dir);
}
