#include <greylift/verify.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace greylift;

TEST(McEstimate, MeanAndStandardError) {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const McEstimate e = mc_estimate(v);
    EXPECT_DOUBLE_EQ(e.value, 2.5);
    EXPECT_NEAR(e.std_error, std::sqrt((5.0 / 3.0) / 4.0), 1e-15);
    EXPECT_EQ(e.n_samples, 4u);
}

TEST(Probe, ThreeSigmaBand) {
    McEstimate e{1.02, 0.01, 100};
    EXPECT_TRUE(make_probe("in", 1.0, e).pass);
    e.value = 1.04;
    EXPECT_FALSE(make_probe("out", 1.0, e).pass);
    EXPECT_TRUE(make_probe("allowance", 1.0, e, 0.02).pass);
    EXPECT_NEAR(make_probe("z", 1.0, e).z, 4.0, 1e-12);
}

TEST(Empirical, QueriesOffGridFail) {
    const auto ens = fbm_cholesky(0.5, TimeGrid::uniform(1.0, 4), 10, 1, 1);
    EXPECT_THROW(empirical_cov(ens, 0.3, 1.0), QueryError);
    const double th[1] = {1.0};
    EXPECT_THROW(empirical_char(ens, std::vector<double>{0.3}, th), QueryError);
    EXPECT_EQ(empirical_cov(ens, 0.0, 1.0).value, 0.0);
}

TEST(Empirical, BrownianCharacteristicFunction) {
    const auto ens = fbm_cholesky(0.5, TimeGrid::uniform(1.0, 4), 100000, 1, 8);
    const double th[1] = {1.0};
    const CharEstimate c = empirical_char(ens, std::vector<double>{1.0}, th);
    EXPECT_NEAR(c.real.value, std::exp(-0.5), 3.0 * c.real.std_error);
    EXPECT_NEAR(c.imag.value, 0.0, 3.0 * c.imag.std_error);
}

TEST(Empirical, FbmCovarianceExample) {
    const auto ens = fbm_cholesky(0.6, TimeGrid::uniform(2.0, 2), 100000, 1, 10);
    const McEstimate c = empirical_cov(ens, 2.0, 1.0);
    EXPECT_NEAR(c.value, 1.1487, 3.0 * c.std_error + 1e-4);
}

TEST(EvenMoments, Formula) {
    EXPECT_NEAR(ggbm_even_moment(0.5, 0.5, 1.0, 1), 1.0 / std::tgamma(1.5), 1e-14);
    EXPECT_NEAR(ggbm_even_moment(1.0, 0.5, 1.0, 2), 3.0, 1e-13);
}

TEST(LawSuite, PassesForExactGenerator) {
    const LawReport r = run_law_suite(validate_params(0.5, 1.0));
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.probes.size(), 20u);
}

TEST(LawSuite, UnitYReducesToBrownianBattery) {
    LawSuiteConfig cfg;
    cfg.hook = SuiteHook::unit_y;
    EXPECT_TRUE(run_law_suite(validate_params(0.5, 1.0), cfg).pass);
}

TEST(LawSuite, CorruptedYFailsOnMoments) {
    LawSuiteConfig cfg;
    cfg.hook = SuiteHook::corrupted_y;
    const LawReport r = run_law_suite(validate_params(0.5, 1.0), cfg);
    EXPECT_FALSE(r.pass);
    EXPECT_TRUE(r.retried);
    bool moment_fail = false;
    for (const Probe& p : r.probes) {
        if (p.description.rfind("moment", 0) == 0 && !p.pass && std::abs(p.z) > 3.0) moment_fail = true;
    }
    EXPECT_TRUE(moment_fail);
}

TEST(LawSuite, BitReproducible) {
    LawSuiteConfig cfg;
    cfg.n_paths = 2000;
    cfg.retry = false;
    const LawReport a = run_law_suite(validate_params(0.3, 1.4), cfg);
    const LawReport b = run_law_suite(validate_params(0.3, 1.4), cfg);
    ASSERT_EQ(a.probes.size(), b.probes.size());
    for (std::size_t i = 0; i < a.probes.size(); ++i) {
        EXPECT_EQ(a.probes[i].estimate.value, b.probes[i].estimate.value);
    }
}
