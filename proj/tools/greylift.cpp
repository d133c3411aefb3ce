// greylift: command-line front end for the greylift library.
//
// Every subcommand prints a one-line JSON summary on stdout. Path outputs are
// written atomically next to a <file>.meta.json sidecar.
//
// Exit codes: 0 success, 1 verification failure, 2 argument error,
// 3 numerical or I/O failure.

#include <greylift/greylift.hpp>
#include <greylift/io.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using greylift::TimeGrid;
using json = nlohmann::ordered_json;

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct GridFlags {
    double t_max = 1.0;
    std::size_t n_steps = 100;

    void add(CLI::App* app) {
        app->add_option("--t-max", t_max, "Final time of the uniform grid starting at 0")->capture_default_str();
        app->add_option("--n-steps", n_steps, "Number of grid intervals")->capture_default_str();
    }
    TimeGrid grid() const { return TimeGrid::uniform(t_max, n_steps); }
};

struct OutputFlags {
    std::string out;
    std::string format = "csv";

    void add(CLI::App* app) {
        app->add_option("--out,-o", out, "Output file (omit to print only the summary)");
        app->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    }
};

struct LiftFlags {
    std::optional<std::size_t> m;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::string anchor = "stationary";
    bool independent_noise = false;

    void add(CLI::App* app) {
        app->add_option("--nodes", m,
                        "Number of OU nodes. Default: the scanned configuration for this H and t-max "
                        "(480 nodes on [1e-13, 1e11] / t-max rough, 300 on [10^-6.5, 10^5.5] / t-max smooth)");
        app->add_option("--x-min,--xmin", x_min, "Smallest node rate (default: see --nodes)");
        app->add_option("--x-max,--xmax", x_max, "Largest node rate (default: see --nodes)");
        app->add_option("--anchor", anchor, "stationary targets fBm, zero_start the Riemann-Liouville process")
            ->check(CLI::IsMember({"stationary", "zero_start"}))
            ->capture_default_str();
        app->add_flag("--independent-noise", independent_noise,
                      "Drive every node by its own Brownian motion (negative control)");
    }

    greylift::LiftConfig config(double hurst, double horizon) const {
        greylift::LiftConfig cfg = greylift::default_lift_config(hurst, horizon);
        if (m) cfg.m = *m;
        if (x_min) cfg.x_min = *x_min;
        if (x_max) cfg.x_max = *x_max;
        cfg.anchor = anchor == "zero_start" ? greylift::LiftAnchor::zero_start : greylift::LiftAnchor::stationary;
        cfg.shared_noise = !independent_noise;
        return cfg;
    }
};

json lift_json(const greylift::LiftConfig& c) {
    return {{"nodes", c.m},
            {"x_min", c.x_min},
            {"x_max", c.x_max},
            {"anchor", c.anchor == greylift::LiftAnchor::stationary ? "stationary" : "zero_start"},
            {"shared_noise", c.shared_noise}};
}

// Writes the ensemble as CSV plus sidecar, or as a single JSON document.
void write_paths(const OutputFlags& o, const greylift::PathEnsemble& ens, const json& extra) {
    if (o.out.empty()) return;
    if (o.format == "csv") {
        greylift::io::write_ensemble(o.out, ens, extra);
        return;
    }
    json doc;
    doc["metadata"] = greylift::io::metadata(ens);
    for (auto it = extra.begin(); it != extra.end(); ++it) doc["metadata"][it.key()] = it.value();
    json paths = json::array();
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        json rows = json::array();
        for (std::size_t i = 0; i < ens.n_times(); ++i) {
            json row = json::array();
            for (std::size_t c = 0; c < ens.d; ++c) row.push_back(ens.at(p, i, c));
            rows.push_back(std::move(row));
        }
        paths.push_back(std::move(rows));
    }
    doc["paths"] = std::move(paths);
    greylift::io::write_atomic(o.out, doc.dump() + "\n");
}

void print_summary(const json& j) { std::cout << j.dump() << std::endl; }

json eval_json(const char* fn, const greylift::Evaluation& e) {
    return {{"command", std::string("eval ") + fn}, {"value", e.value}, {"residual", e.residual}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"greylift: generalized grey Brownian motion simulation and verification"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    unsigned threads = 0;
    app.add_option("--threads", threads,
                   "Worker threads for path generation (0: GREYLIFT_THREADS, then hardware parallelism)")
        ->capture_default_str();

    std::string op_name;
    std::function<int()> action;

    // eval ---------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "Evaluate a special function");
    eval->require_subcommand(1);
    double e_beta = 0.5, e_z = 0.0, e_rho = 1.0, e_x = 0.0, e_t = 1.0;
    int e_d = 1;
    std::vector<double> e_y;
    auto* ml = eval->add_subcommand("ml", "Mittag-Leffler E_beta(z)");
    ml->add_option("--beta", e_beta, "beta in (0, 1]")->required();
    ml->add_option("--z", e_z, "Real argument")->required();
    ml->callback([&] {
        op_name = "eval ml";
        action = [&] {
            print_summary(eval_json("ml", greylift::mittag_leffler_eval(e_beta, e_z)));
            return 0;
        };
    });
    auto* gml = eval->add_subcommand("gml", "Two-parameter Mittag-Leffler E_{beta,rho}(z)");
    gml->add_option("--beta", e_beta, "beta in (0, 1]")->required();
    gml->add_option("--rho", e_rho, "rho > 0")->required();
    gml->add_option("--z", e_z, "Real argument")->required();
    gml->callback([&] {
        op_name = "eval gml";
        action = [&] {
            print_summary(eval_json("gml", {greylift::gen_mittag_leffler(e_beta, e_rho, e_z), 0.0}));
            return 0;
        };
    });
    auto* mw = eval->add_subcommand("mwright", "M-Wright density M_beta(x)");
    mw->add_option("--beta", e_beta, "beta in (0, 1)")->required();
    mw->add_option("--x", e_x, "x >= 0")->required();
    mw->callback([&] {
        op_name = "eval mwright";
        action = [&] {
            print_summary(eval_json("mwright", greylift::m_wright_eval(e_beta, e_x)));
            return 0;
        };
    });
    auto* mw2 = eval->add_subcommand("mwright2", "Two-variable M-Wright density M_{beta/2}(x, t)");
    mw2->add_option("--beta", e_beta, "beta in (0, 1]")->required();
    mw2->add_option("--x", e_x, "Real x")->required();
    mw2->add_option("--t", e_t, "t > 0")->required();
    mw2->callback([&] {
        op_name = "eval mwright2";
        action = [&] {
            print_summary(eval_json("mwright2", {greylift::m_wright_2var(e_beta, e_x, e_t), 0.0}));
            return 0;
        };
    });
    auto* mwd = eval->add_subcommand("mwright-d", "d-dimensional M-Wright density");
    mwd->add_option("--beta", e_beta, "beta in (0, 1]")->required();
    mwd->add_option("--d", e_d, "Dimension")->required();
    mwd->add_option("--y", e_y, "Point, comma separated")->required()->delimiter(',');
    mwd->add_option("--t", e_t, "t > 0")->required();
    mwd->callback([&] {
        op_name = "eval mwright-d";
        action = [&] {
            print_summary(eval_json("mwright-d", greylift::m_wright_d_eval(e_beta, e_d, e_y, e_t)));
            return 0;
        };
    });

    // sample-y -----------------------------------------------------------
    auto* sy = app.add_subcommand("sample-y", "Draw the subordinator Y_beta");
    double sy_beta = 0.5;
    std::size_t sy_n = 1000;
    std::uint64_t seed = 1;
    OutputFlags sy_out;
    sy->add_option("--beta", sy_beta, "beta in (0, 1)")->required();
    sy->add_option("--n", sy_n, "Number of draws")->capture_default_str();
    sy->add_option("--seed", seed, "Seed")->capture_default_str();
    sy_out.add(sy);
    sy->callback([&] {
        op_name = "sample-y";
        action = [&] {
            if (sy_n < 1) throw greylift::ParameterError("n", "must be >= 1");
            std::vector<double> y(sy_n);
            for (std::size_t i = 0; i < sy_n; ++i) {
                greylift::RngStream rng = greylift::subordinator_stream(seed, i);
                y[i] = greylift::sample_y_beta(sy_beta, rng);
            }
            const greylift::McEstimate m = greylift::mc_estimate(y);
            json meta = {{"command", "sample-y"}, {"beta", sy_beta}, {"n", sy_n}, {"seed", seed}};
            if (!sy_out.out.empty()) {
                std::string body;
                if (sy_out.format == "csv") {
                    body = "index,y\n";
                    for (std::size_t i = 0; i < sy_n; ++i) {
                        body += std::to_string(i) + "," + greylift::io::format_double(y[i]) + "\n";
                    }
                    greylift::io::write_atomic(greylift::io::sidecar_path(sy_out.out), meta.dump(2) + "\n");
                } else {
                    body = json{{"metadata", meta}, {"y", y}}.dump() + "\n";
                }
                greylift::io::write_atomic(sy_out.out, body);
            }
            json s = meta;
            s["mean"] = m.value;
            s["std_error"] = m.std_error;
            s["expected_mean"] = greylift::y_beta_moment(sy_beta, 1);
            if (!sy_out.out.empty()) s["out"] = sy_out.out;
            print_summary(s);
            return 0;
        };
    });

    // fbm ----------------------------------------------------------------
    auto* fbm = app.add_subcommand("fbm", "Exact fractional Brownian motion paths");
    double hurst = 0.5;
    std::size_t paths = 1000, dim = 1;
    std::string fbm_method = "cholesky";
    GridFlags fbm_grid;
    OutputFlags fbm_out;
    double mvn_left = 0.0;
    int mvn_quad = 100;
    fbm->add_option("--hurst", hurst, "Hurst index in (0, 1)")->required();
    fbm->add_option("--method", fbm_method, "Generator")
        ->check(CLI::IsMember({"cholesky", "circulant", "mvn"}))
        ->capture_default_str();
    fbm_grid.add(fbm);
    fbm->add_option("--paths", paths, "Number of paths")->capture_default_str();
    fbm->add_option("--d", dim, "Dimension")->capture_default_str();
    fbm->add_option("--seed", seed, "Seed")->capture_default_str();
    fbm->add_option("--mvn-left", mvn_left, "Moving-average truncation (0: 50 t-max)")->capture_default_str();
    fbm->add_option("--mvn-cells", mvn_quad, "Moving-average cells per unit time")->capture_default_str();
    fbm_out.add(fbm);
    fbm->callback([&] {
        op_name = "fbm";
        action = [&] {
            const greylift::Execution exec{threads};
            const TimeGrid grid = fbm_grid.grid();
            greylift::PathEnsemble ens;
            json extra = {{"command", "fbm"}, {"hurst", hurst}};
            if (fbm_method == "cholesky") {
                ens = greylift::fbm_cholesky(hurst, grid, paths, dim, seed, exec);
            } else if (fbm_method == "circulant") {
                ens = greylift::fbm_circulant(hurst, grid, paths, dim, seed, exec);
            } else {
                greylift::MvnConfig mc{mvn_left, mvn_quad};
                ens = greylift::fbm_mvn(hurst, grid, paths, dim, seed, mc, exec);
                extra["mvn_left"] = mc.resolved_left(grid.back());
                extra["mvn_cells"] = mvn_quad;
                extra["variance_bias_at_t_max"] = greylift::mvn_variance_bias(hurst, grid, mc).back();
            }
            write_paths(fbm_out, ens, extra);
            json s = extra;
            s["method"] = fbm_method;
            s["paths"] = paths;
            s["n_times"] = grid.size();
            s["var_at_t_max"] = greylift::empirical_cov(ens, grid.back(), grid.back()).value;
            s["target_var_at_t_max"] = std::pow(grid.back(), 2.0 * hurst);
            if (!fbm_out.out.empty()) s["out"] = fbm_out.out;
            print_summary(s);
            return 0;
        };
    });

    // lift ---------------------------------------------------------------
    auto* lift = app.add_subcommand("lift", "Markovian OU-bank approximation of fBm");
    GridFlags lift_grid;
    LiftFlags lift_flags;
    OutputFlags lift_out;
    lift->add_option("--hurst", hurst, "Hurst index in (0, 1), H != 1/2")->required();
    lift_grid.add(lift);
    lift_flags.add(lift);
    lift->add_option("--paths", paths, "Number of paths")->capture_default_str();
    lift->add_option("--d", dim, "Dimension")->capture_default_str();
    lift->add_option("--seed", seed, "Seed")->capture_default_str();
    lift_out.add(lift);
    bool report_cov_error = false;
    lift->add_flag("--report-cov-error", report_cov_error,
                   "Add the sup relative covariance error on [0.1 t-max, t-max]^2 to the summary");
    lift->callback([&] {
        op_name = "lift";
        action = [&] {
            const TimeGrid grid = lift_grid.grid();
            const greylift::LiftConfig cfg = lift_flags.config(hurst, grid.back());
            const greylift::Regime regime = greylift::regime_for_hurst(hurst);
            const greylift::LiftNodes nodes = greylift::build_nodes(hurst, regime, cfg.m, cfg.x_min, cfg.x_max);
            const greylift::LiftSimulation sim =
                greylift::simulate_bank(nodes, grid, paths, dim, seed, cfg, greylift::Execution{threads});
            json extra = {{"command", "lift"}, {"hurst", hurst}, {"regime", greylift::to_string(regime)},
                          {"lift", lift_json(cfg)}};
            write_paths(lift_out, sim.paths, extra);
            const double t = grid.back();
            json s = extra;
            s["paths"] = paths;
            s["noise_rank"] = sim.noise_rank;
            s["integrability_value"] = greylift::integrability_value(hurst, regime);
            s["truncation_bound"] = greylift::truncation_bound(hurst, regime, cfg.x_min, cfg.x_max, t);
            s["lift_var_at_t_max"] = greylift::lift_covariance(nodes, t, t, cfg.anchor);
            s["target_var_at_t_max"] = greylift::lift_target_covariance(hurst, t, t, cfg.anchor);
            s["empirical_var_at_t_max"] = greylift::empirical_cov(sim.paths, t, t).value;
            if (report_cov_error) {
                std::vector<double> probes;
                for (int i = 0; i <= 18; ++i) probes.push_back(t * (0.1 + 0.05 * i));
                s["sup_rel_cov_error"] = greylift::lift_sup_relative_error(nodes, probes, cfg.anchor);
            }
            if (!lift_out.out.empty()) s["out"] = lift_out.out;
            print_summary(s);
            return 0;
        };
    });

    // ggbm ---------------------------------------------------------------
    auto* ggbm = app.add_subcommand("ggbm", "Generalized grey Brownian motion paths");
    double beta = 0.5, alpha = 1.0;
    std::string g_method = "exact", g_generator = "cholesky";
    GridFlags g_grid;
    LiftFlags g_lift;
    OutputFlags g_out;
    ggbm->add_option("--beta", beta, "beta in (0, 1)")->required();
    ggbm->add_option("--alpha", alpha, "alpha in (0, 2)")->required();
    ggbm->add_option("--method", g_method, "exact Gaussian generator or the Markovian lift")
        ->check(CLI::IsMember({"exact", "lift"}))
        ->capture_default_str();
    ggbm->add_option("--generator", g_generator, "Exact generator")
        ->check(CLI::IsMember({"cholesky", "circulant", "mvn"}))
        ->capture_default_str();
    g_grid.add(ggbm);
    g_lift.add(ggbm);
    ggbm->add_option("--paths", paths, "Number of paths")->capture_default_str();
    ggbm->add_option("--d", dim, "Dimension")->capture_default_str();
    ggbm->add_option("--seed", seed, "Seed")->capture_default_str();
    g_out.add(ggbm);
    ggbm->callback([&] {
        op_name = "ggbm";
        action = [&] {
            const greylift::GreyParams params = greylift::validate_params(beta, alpha);
            const TimeGrid grid = g_grid.grid();
            greylift::GgbmOptions opt;
            json extra = {{"command", "ggbm"}};
            if (g_method == "lift") {
                opt.method = greylift::GgbmMethod::lift;
                opt.lift = g_lift.config(params.hurst(), grid.back());
                extra["lift"] = lift_json(*opt.lift);
            } else {
                opt.exact_generator = greylift::method_from_string(g_generator);
            }
            const greylift::PathEnsemble ens =
                greylift::ggbm_paths(params, grid, paths, dim, seed, opt, greylift::Execution{threads});
            write_paths(g_out, ens, extra);
            const double t = grid.back();
            json s = extra;
            s["beta"] = beta;
            s["alpha"] = alpha;
            s["method"] = g_method == "lift" ? "lift" : g_generator;
            s["paths"] = paths;
            s["second_moment_at_t_max"] = greylift::empirical_cov(ens, t, t).value;
            s["target_second_moment_at_t_max"] =
                std::pow(t, alpha) * greylift::y_beta_moment(beta, 1);
            if (!g_out.out.empty()) s["out"] = g_out.out;
            print_summary(s);
            return 0;
        };
    });

    // law ----------------------------------------------------------------
    auto* law = app.add_subcommand("law", "Analytic laws");
    law->require_subcommand(1);
    std::vector<double> l_times, l_values;
    double l_x = 1.0, l_t = 1.0;
    std::string l_regime = "rough";
    auto add_ggbm_law = [&](CLI::App* sub, const char* values_help) {
        sub->add_option("--beta", beta, "beta in (0, 1)")->required();
        sub->add_option("--alpha", alpha, "alpha in (0, 2)")->required();
        sub->add_option("--times", l_times, "Increasing times, comma separated")->required()->delimiter(',');
        sub->add_option("--values", l_values, values_help)->required()->delimiter(',');
        sub->add_option("--d", dim, "Dimension")->capture_default_str();
    };
    auto add_ou_law = [&](CLI::App* sub, const char* values_help) {
        sub->add_option("--beta", beta, "beta in (0, 1]")->required();
        sub->add_option("--x", l_x, "Node rate x >= 0")->required();
        sub->add_option("--t", l_t, "Time t > 0")->capture_default_str();
        sub->add_option("--regime", l_regime, "rough (Z) or smooth (W)")
            ->check(CLI::IsMember({"rough", "smooth"}))
            ->capture_default_str();
        sub->add_option("--values", l_values, values_help)->required()->delimiter(',');
    };
    auto ggbm_query = [&] {
        return greylift::GgbmLawQuery{greylift::validate_params(beta, alpha), l_times, l_values, dim};
    };
    auto ou_query = [&] {
        return greylift::GreyOUQuery{beta, l_x, l_t, l_values.size(),
                                     l_regime == "rough" ? greylift::GreyOURegime::rough_Z
                                                         : greylift::GreyOURegime::smooth_W};
    };
    auto law_json = [&](const char* name, const greylift::Evaluation& e) {
        json query;
        if (std::string(name).rfind("grey-ou", 0) == 0) {
            query = {{"beta", beta}, {"x", l_x}, {"t", l_t}, {"regime", l_regime}, {"values", l_values}};
        } else {
            query = {{"beta", beta}, {"alpha", alpha}, {"times", l_times}, {"values", l_values}, {"d", dim}};
        }
        return json{{"command", std::string("law ") + name},
                    {"query", query},
                    {"value", e.value},
                    {"quadrature_residual", e.residual}};
    };
    auto* l_char = law->add_subcommand("char", "Characteristic function of ggBm at several times");
    add_ggbm_law(l_char, "theta_k rows (n x d), comma separated");
    l_char->callback([&] {
        op_name = "law char";
        action = [&] {
            print_summary(law_json("char", greylift::ggbm_char_eval(ggbm_query())));
            return 0;
        };
    });
    auto* l_dens = law->add_subcommand("density", "Joint density of ggBm at several times");
    add_ggbm_law(l_dens, "Points y_k (n x d), comma separated");
    l_dens->callback([&] {
        op_name = "law density";
        action = [&] {
            print_summary(law_json("density", greylift::ggbm_density_eval(ggbm_query())));
            return 0;
        };
    });
    auto* l_ochar = law->add_subcommand("grey-ou-char", "Characteristic function of a grey OU process");
    add_ou_law(l_ochar, "Frequency vector k, comma separated");
    l_ochar->callback([&] {
        op_name = "law grey-ou-char";
        action = [&] {
            print_summary(law_json("grey-ou-char", greylift::grey_ou_char_eval(ou_query(), l_values)));
            return 0;
        };
    });
    auto* l_odens = law->add_subcommand("grey-ou-density", "Density of a grey OU process");
    add_ou_law(l_odens, "Point y, comma separated");
    l_odens->callback([&] {
        op_name = "law grey-ou-density";
        action = [&] {
            print_summary(law_json("grey-ou-density", greylift::grey_ou_density_eval(ou_query(), l_values)));
            return 0;
        };
    });

    // verify -------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "Run the law verification battery");
    std::size_t v_paths = 100000;
    std::string v_method = "exact", v_report, v_hook = "none";
    bool v_no_retry = false;
    verify->add_option("--beta", beta, "beta in (0, 1)")->required();
    verify->add_option("--alpha", alpha, "alpha in (0, 2)")->required();
    verify->add_option("--paths", v_paths, "Number of paths")->capture_default_str();
    verify->add_option("--seed", seed, "Seed")->capture_default_str();
    verify->add_option("--method", v_method, "Path generator")
        ->check(CLI::IsMember({"exact", "lift"}))
        ->capture_default_str();
    verify->add_option("--generator", g_generator, "Exact generator")
        ->check(CLI::IsMember({"cholesky", "circulant", "mvn"}))
        ->capture_default_str();
    verify->add_option("--hook", v_hook, "Subordinator test hook")
        ->check(CLI::IsMember({"none", "unit-y", "corrupted-y"}))
        ->capture_default_str();
    verify->add_flag("--no-retry", v_no_retry, "Do not rerun a failing battery with a second seed");
    verify->add_option("--json", v_report, "Write the full report to this file");
    verify->callback([&] {
        op_name = "verify";
        action = [&] {
            greylift::LawSuiteConfig cfg;
            cfg.n_paths = v_paths;
            cfg.seed = seed;
            cfg.method = v_method == "lift" ? greylift::GgbmMethod::lift : greylift::GgbmMethod::exact;
            cfg.exact_generator = greylift::method_from_string(g_generator);
            cfg.hook = v_hook == "unit-y"        ? greylift::SuiteHook::unit_y
                       : v_hook == "corrupted-y" ? greylift::SuiteHook::corrupted_y
                                                 : greylift::SuiteHook::none;
            cfg.retry = !v_no_retry;
            cfg.exec = greylift::Execution{threads};
            const greylift::LawReport rep = greylift::run_law_suite(greylift::validate_params(beta, alpha), cfg);
            std::size_t failed = 0;
            double max_z = 0.0;
            json probes = json::array();
            for (const auto& p : rep.probes) {
                if (!p.pass) ++failed;
                max_z = std::max(max_z, std::abs(p.z));
                probes.push_back({{"probe", p.description},
                                  {"analytic", p.analytic},
                                  {"estimate", p.estimate.value},
                                  {"std_error", p.estimate.std_error},
                                  {"z", p.z},
                                  {"bias_allowance", p.bias_allowance},
                                  {"pass", p.pass}});
            }
            json s = {{"command", "verify"}, {"beta", beta},           {"alpha", alpha},
                      {"method", v_method},  {"paths", v_paths},       {"seed", rep.seed},
                      {"retried", rep.retried}, {"probes", rep.probes.size()}, {"failed", failed},
                      {"max_abs_z", max_z},  {"pass", rep.pass}};
            if (!v_report.empty()) {
                json full = s;
                full["probe_results"] = probes;
                greylift::io::write_atomic(v_report, full.dump(2) + "\n");
                s["report"] = v_report;
            }
            print_summary(s);
            return rep.pass ? 0 : kExitVerify;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    try {
        return action();
    } catch (const greylift::ParameterError& e) {
        std::cerr << "greylift " << op_name << ": invalid argument: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const greylift::io::IoError& e) {
        std::cerr << "greylift " << op_name << ": I/O failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const greylift::Error& e) {
        std::cerr << "greylift " << op_name << ": numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "greylift " << op_name << ": failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}
