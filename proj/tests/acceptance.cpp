// Acceptance checks AC1..AC10. One PASS/FAIL line per criterion; the exit
// status is nonzero if any criterion fails. Runtime limits count toward the
// verdict.

#include <greylift/greylift.hpp>
#include <greylift/io.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#ifndef GREYLIFT_CLI_PATH
#define GREYLIFT_CLI_PATH "greylift"
#endif

using namespace greylift;
namespace fs = std::filesystem;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void run(const char* id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = limit_s <= 0.0 || secs < limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++g_failures;
    char timing[96];
    if (limit_s > 0.0) {
        std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s%s", secs, limit_s, in_time ? "" : " EXCEEDED");
    } else {
        std::snprintf(timing, sizeof timing, "%.2f s", secs);
    }
    std::printf("%-4s %s  %s: %s [%s]\n", id, pass ? "PASS" : "FAIL", title, o.detail.c_str(), timing);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Worst |z| of empirical covariances against a model over all grid pairs
// with nonzero times.
double worst_cov_z(const PathEnsemble& ens, const std::function<double(double, double)>& model) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ens.grid.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (ens.grid[i] == 0.0 || ens.grid[j] == 0.0) continue;
            const McEstimate c = empirical_cov(ens, ens.grid[i], ens.grid[j]);
            worst = std::max(worst, std::abs(c.value - model(ens.grid[i], ens.grid[j])) / c.std_error);
        }
    }
    return worst;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome ac1() {
    double e_ml = 0.0, e_exp = 0.0, e_m = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double s = 0.05 * i;
        e_ml = std::max(e_ml, std::abs(mittag_leffler(0.5, -s) - std::exp(s * s) * std::erfc(s)));
    }
    for (int i = 0; i <= 200; ++i) {
        const double z = -5.0 + 0.05 * i;
        e_exp = std::max(e_exp, std::abs(mittag_leffler(1.0, z) - std::exp(z)) / std::exp(z));
    }
    for (int i = 0; i <= 200; ++i) {
        const double x = 0.05 * i;
        e_m = std::max(e_m, std::abs(m_wright(0.5, x) - std::exp(-0.25 * x * x) / std::sqrt(std::numbers::pi)));
    }
    const bool pass = e_ml <= 1e-8 && e_exp <= 1e-12 && e_m <= 1e-10;
    return {pass, "max|E_1/2 - erfc form| " + fmt("%.2e", e_ml) + " (tol 1e-8), max rel|E_1 - exp| " +
                      fmt("%.2e", e_exp) + " (tol 1e-12), max|M_1/2 - gauss| " + fmt("%.2e", e_m) + " (tol 1e-10)"};
}

Outcome ac2() {
    double worst = 0.0;
    for (double beta : {0.3, 0.5, 0.8}) {
        for (double s : {0.1, 1.0, 5.0, 10.0}) {
            auto f = [&](double x) { return std::exp(-s * x) * m_wright(beta, x); };
            const double lt = quad::integrate(f, 0.0, kInf).value;
            worst = std::max(worst, std::abs(lt - mittag_leffler(beta, -s)));
        }
    }
    return {worst <= 1e-6, "max|int e^(-s tau) M_beta - E_beta(-s)| " + fmt("%.2e", worst) + " over 12 pairs (tol 1e-6)"};
}

Outcome ac3() {
    double worst = 0.0;
    int checks = 0;
    for (double beta : {0.3, 0.5, 0.8}) {
        std::vector<double> y(100000);
        for (std::size_t p = 0; p < y.size(); ++p) {
            RngStream rng = subordinator_stream(2024, p);
            y[p] = sample_y_beta(beta, rng);
        }
        std::vector<double> v(y.size());
        for (double s : {0.1, 1.0, 5.0, 10.0}) {
            for (std::size_t p = 0; p < y.size(); ++p) v[p] = std::exp(-s * y[p]);
            const McEstimate m = mc_estimate(v);
            worst = std::max(worst, std::abs(m.value - mittag_leffler(beta, -s)) / m.std_error);
            ++checks;
        }
        for (int n : {1, 2}) {
            for (std::size_t p = 0; p < y.size(); ++p) v[p] = std::pow(y[p], n);
            const McEstimate m = mc_estimate(v);
            worst = std::max(worst, std::abs(m.value - y_beta_moment(beta, n)) / m.std_error);
            ++checks;
        }
    }
    return {worst <= 3.0, std::to_string(checks) + " Laplace/moment probes on 1e5 draws, max |z| " + fmt("%.2f", worst)};
}

Outcome ac4() {
    const TimeGrid grid = TimeGrid::uniform(1.0, 8);
    double worst_chol = 0.0, worst_cross = 0.0;
    for (double h : {0.3, 0.7}) {
        const PathEnsemble chol = fbm_cholesky(h, grid, 100000, 1, 404);
        const PathEnsemble circ = fbm_circulant(h, grid, 100000, 1, 405);
        worst_chol = std::max(worst_chol, worst_cov_z(chol, [h](double t, double s) { return fbm_kernel(h, t, s); }));
        for (std::size_t i = 1; i < grid.size(); ++i) {
            for (std::size_t j = 1; j <= i; ++j) {
                const McEstimate a = empirical_cov(chol, grid[i], grid[j]);
                const McEstimate b = empirical_cov(circ, grid[i], grid[j]);
                const double se = std::hypot(a.std_error, b.std_error);
                worst_cross = std::max(worst_cross, std::abs(a.value - b.value) / se);
            }
        }
    }
    double floor = kInf;
    for (int k = 1; k <= 9; ++k) floor = std::min(floor, circulant_eigenvalue_floor(0.1 * k, 1024));
    const bool pass = worst_chol <= 3.0 && worst_cross <= 3.0 && floor >= -1e-10;
    return {pass, "Cholesky vs kernel max |z| " + fmt("%.2f", worst_chol) + ", circulant vs Cholesky max |z| " +
                      fmt("%.2f", worst_cross) + " (36 entries x 2 H), min eigenvalue ratio " + fmt("%.3e", floor)};
}

Outcome ac5() {
    std::vector<double> probes;
    for (int i = 0; i <= 18; ++i) probes.push_back(0.1 + 0.05 * i);
    bool pass = true;
    std::string detail;
    for (double h : {0.25, 0.75}) {
        const Regime r = regime_for_hurst(h);
        LiftConfig c = lift_ladder_base(h);
        std::string ladder;
        double prev = kInf, def_err = kInf;
        bool mono = true;
        for (int rung = 0; rung < 4; ++rung) {
            const double e = lift_sup_relative_error(build_nodes(h, r, c.m, c.x_min, c.x_max), probes);
            mono = mono && e < prev;
            if (rung == 2) def_err = e;
            ladder += (rung ? "," : "") + fmt("%.1e", e);
            prev = e;
            c = double_config(c);
        }
        const LiftConfig d = default_lift_config(h);
        pass = pass && mono && def_err <= 1e-2;
        detail += "H=" + fmt("%.2f", h) + " default m=" + std::to_string(d.m) + " err " + fmt("%.2e", def_err) +
                  " ladder [" + ladder + "]" + (mono ? " monotone" : " NOT monotone") + "; ";
    }
    // Informational: the unscanned m = 200 on [1e-4, 1e4].
    const double e200 = lift_sup_relative_error(build_nodes(0.25, Regime::rough, 200, 1e-4, 1e4), probes);
    detail += "(m=200 on [1e-4,1e4] gives " + fmt("%.2e", e200) + " at H=0.25)";
    return {pass, detail};
}

Outcome ac6() {
    const TimeGrid grid = TimeGrid::uniform(1.0, 4);
    const std::vector<std::pair<double, double>> probes{{1.0, 1.0},   {0.5, 1.0},  {0.5, 0.5},
                                                        {0.25, 0.75}, {0.75, 0.75}, {0.25, 0.25}};
    bool pass = true;
    std::string detail;
    for (double h : {0.25, 0.75}) {
        const LiftConfig cfg = default_lift_config(h);
        const LiftNodes nodes = build_nodes(h, regime_for_hurst(h), cfg.m, cfg.x_min, cfg.x_max);
        auto worst = [&](const LiftConfig& c) {
            const LiftSimulation sim = simulate_bank(nodes, grid, 10000, 1, 606, c);
            double w = 0.0;
            for (auto [t, s] : probes) {
                const McEstimate e = empirical_cov(sim.paths, t, s);
                w = std::max(w, std::abs(e.value - lift_covariance(nodes, t, s)) / e.std_error);
            }
            return w;
        };
        LiftConfig control = cfg;
        control.shared_noise = false;
        const double z_shared = worst(cfg);
        const double z_control = worst(control);
        pass = pass && z_shared <= 3.0 && z_control > 3.0;
        detail += "H=" + fmt("%.2f", h) + " shared max |z| " + fmt("%.2f", z_shared) + ", independent-noise control max |z| " +
                  fmt("%.1f", z_control) + "; ";
    }
    return {pass, detail};
}

Outcome ac7() {
    bool pass = true;
    std::string detail;
    for (auto [b, a] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {0.5, 1.0}, {0.3, 1.4}}) {
        LawSuiteConfig cfg;
        cfg.seed = 7;
        const LawReport r = run_law_suite(validate_params(b, a), cfg);
        double wz = 0.0;
        for (const Probe& p : r.probes) wz = std::max(wz, std::abs(p.z));
        pass = pass && r.pass;
        detail += "(" + fmt("%.1f", b) + "," + fmt("%.1f", a) + ") " + (r.pass ? "pass" : "fail") +
                  (r.retried ? " after retry" : "") + " max|z| " + fmt("%.2f", wz) + "; ";
    }
    const TimeGrid grid = TimeGrid::uniform(1.0, 10);
    for (auto reg : {GreyOURegime::rough_Z, GreyOURegime::smooth_W}) {
        const PathEnsemble ens = grey_ou_paths(0.5, 1.0, grid, 100000, 1, reg, 77);
        const GreyOUQuery q{0.5, 1.0, 1.0, 1, reg};
        const McEstimate v = empirical_cov(ens, 1.0, 1.0);
        const double z = (v.value - q.norm_sq() / std::tgamma(1.5)) / v.std_error;
        pass = pass && std::abs(z) <= 3.0;
        detail += std::string(reg == GreyOURegime::rough_Z ? "grey OU Z" : "grey OU W") + " var z " + fmt("%.2f", z) + "; ";
    }
    return {pass, detail};
}

Outcome ac8() {
    const GreyOUQuery q{0.5, 1.0, 1.0, 1, GreyOURegime::rough_Z};
    auto rho = [&](double y) {
        const double v[1] = {y};
        return grey_ou_density(q, v);
    };
    const double mass = quad::integrate([&](double y) { return 2.0 * rho(y); }, 0.0, kInf).value;
    const double m2 = quad::integrate([&](double y) { return 2.0 * y * y * rho(y); }, 0.0, kInf).value;
    const double m2_target = q.norm_sq() / std::tgamma(1.5);
    double ft_err = 0.0;
    quad::Options opt;
    opt.abs_tol = 1e-8;
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        auto f = [&](double y) { return 2.0 * std::cos(k * y) * rho(y); };
        const double kk[1] = {k};
        ft_err = std::max(ft_err, std::abs(quad::integrate_pieces(f, {0.0, 2.0, 8.0, 30.0, kInf}, opt).value -
                                           grey_ou_char(q, kk)));
    }
    // ggbm_density at one time against the M-Wright closed form and against
    // the Gaussian mixture int N(y; 0, tau t^(2H)) M_beta(tau) dtau.
    double closed_err = 0.0, mix_err = 0.0;
    for (auto [b, a] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {0.3, 1.4}, {0.7, 1.0}}) {
        for (double t : {0.5, 1.0, 2.0}) {
            for (double y : {0.0, 0.4, 1.5}) {
                const GgbmLawQuery gq{validate_params(b, a), {t}, {y}, 1};
                const double dens = ggbm_density(gq);
                const double n = std::pow(t, a);
                const double v[1] = {std::sqrt(2.0) * y};
                closed_err = std::max(closed_err, std::abs(dens - std::sqrt(2.0) * m_wright_d(b, 1, v, std::pow(n, 1.0 / b))));
                auto g = [&](double tau) {
                    if (tau == 0.0) return 0.0;
                    const double var = tau * n;
                    return std::exp(-0.5 * y * y / var) / std::sqrt(2.0 * std::numbers::pi * var) * m_wright(b, tau);
                };
                quad::Options mo;
                mo.abs_tol = 1e-10;
                mix_err = std::max(mix_err, std::abs(dens - quad::integrate_pieces(g, {0.0, 1.0, kInf}, mo).value));
            }
        }
    }
    const bool pass = std::abs(mass - 1.0) <= 1e-4 && std::abs(m2 - m2_target) <= 1e-4 && ft_err <= 1e-3 &&
                      closed_err <= 1e-6 && mix_err <= 1e-6;
    return {pass, "grey OU mass-1 " + fmt("%.1e", mass - 1.0) + ", second moment err " + fmt("%.1e", m2 - m2_target) +
                      ", max FT err " + fmt("%.1e", ft_err) + " (5 k), ggbm density vs closed form " +
                      fmt("%.1e", closed_err) + ", vs mixture quadrature " + fmt("%.1e", mix_err)};
}

Outcome ac9() {
    const double r = integrability_value(0.25, Regime::rough);
    const double s = integrability_value(0.75, Regime::smooth);
    int rejected = 0, attempts = 0;
    auto expect_throw = [&](double h, Regime reg) {
        ++attempts;
        try {
            integrability_value(h, reg);
        } catch (const DivergenceError&) {
            ++rejected;
        }
    };
    for (double h : {0.0, 0.5, 0.7, -0.1}) expect_throw(h, Regime::rough);
    for (double h : {0.5, 0.25, 1.0, 1.2}) expect_throw(h, Regime::smooth);
    const bool pass = r == 8.0 && s == 8.0 / 3.0 && rejected == attempts;
    return {pass, "rough H=0.25 -> " + fmt("%.17g", r) + ", smooth H=0.75 -> " + fmt("%.17g", s) + ", " +
                      std::to_string(rejected) + "/" + std::to_string(attempts) + " out-of-range H rejected"};
}

Outcome ac10() {
    const fs::path dir = fs::temp_directory_path() / "greylift_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = GREYLIFT_CLI_PATH;
    const std::vector<std::pair<std::string, std::string>> cmds{
        {"fbm_chol", "fbm --hurst 0.3 --method cholesky --t-max 1 --n-steps 16 --paths 200 --seed 5"},
        {"fbm_circ", "fbm --hurst 0.7 --method circulant --t-max 2 --n-steps 32 --paths 200 --seed 5 --d 2"},
        {"fbm_mvn", "fbm --hurst 0.4 --method mvn --t-max 1 --n-steps 8 --paths 100 --seed 5"},
        {"lift", "lift --hurst 0.25 --t-max 1 --n-steps 16 --paths 100 --seed 9"},
        {"ggbm", "ggbm --beta 0.5 --alpha 0.5 --t-max 1 --n-steps 16 --paths 200 --seed 3"},
        {"ggbm_lift", "ggbm --beta 0.4 --alpha 1.5 --method lift --nodes 60 --t-max 1 --n-steps 8 --paths 100 --seed 3"},
        {"ggbm_json", "ggbm --beta 0.6 --alpha 1.2 --generator circulant --format json --t-max 1 --n-steps 8 --paths 50 --seed 3"},
        {"sample_y", "sample-y --beta 0.3 --n 500 --seed 11"},
        {"verify", "verify --beta 0.5 --alpha 1.0 --paths 2000 --seed 1 --no-retry"},
    };
    int identical = 0;
    std::string bad;
    for (const auto& [name, args] : cmds) {
        std::vector<std::string> blobs;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path run_dir = dir / (name + "_" + std::to_string(rep));
            fs::create_directories(run_dir);
            // Same relative output path for both runs, so stdout summaries must match too.
            const bool is_verify = name == "verify";
            const std::string out_flag = is_verify ? " --json out.json" : " --out out.csv";
            // --threads is global and precedes the subcommand; it must not change any byte.
            const std::string threads = rep == 1 ? "--threads 3 " : "";
            const std::string cmd = "cd '" + run_dir.string() + "' && '" + cli + "' " + threads + args + out_flag +
                                    " > stdout.txt 2> stderr.txt";
            const int rc = std::system(cmd.c_str());
            std::string blob = "rc=" + std::to_string(rc) + "\n" + slurp(run_dir / "stdout.txt");
            for (const char* f : {"out.csv", "out.csv.meta.json", "out.json"}) {
                if (fs::exists(run_dir / f)) blob += std::string("\n--") + f + "\n" + slurp(run_dir / f);
            }
            if (rc != 0 && !is_verify) blob += "\nFAILED " + slurp(run_dir / "stderr.txt");
            blobs.push_back(std::move(blob));
        }
        if (blobs[0] == blobs[1] && blobs[0].rfind("rc=0\n", 0) == 0) {
            ++identical;
        } else {
            bad += name + " ";
        }
    }
    fs::remove_all(dir);
    const bool pass = identical == static_cast<int>(cmds.size());
    return {pass, std::to_string(identical) + "/" + std::to_string(cmds.size()) +
                      " commands byte-identical across two runs (second run with --threads 3)" +
                      (bad.empty() ? "" : "; differing: " + bad)};
}

}  // namespace

int main() {
    std::printf("greylift acceptance\n");
    run("AC1", "special-function oracles", 1.0, ac1);
    run("AC2", "Laplace duality M_beta -> E_beta", 5.0, ac2);
    run("AC3", "Y_beta sampler", 10.0, ac3);
    run("AC4", "exact fBm generators", 60.0, ac4);
    run("AC5", "Markovian lift, deterministic", 10.0, ac5);
    run("AC6", "Markovian lift, stochastic", 60.0, ac6);
    run("AC7", "ggBm law suite and grey OU variance", 120.0, ac7);
    run("AC8", "density consistency", 30.0, ac8);
    run("AC9", "integrability gates", 1.0, ac9);
    run("AC10", "end-to-end CLI determinism", 0.0, ac10);
    std::printf("%s: %d criteria failed\n", g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures);
    return g_failures == 0 ? 0 : 1;
}
