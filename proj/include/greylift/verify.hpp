#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greylift/error.hpp"
#include "greylift/fbm_exact.hpp"
#include "greylift/greyproc.hpp"
#include "greylift/markov_lift.hpp"
#include "greylift/model.hpp"
#include "greylift/sampling.hpp"
#include "greylift/specfun.hpp"

namespace greylift {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

inline McEstimate mc_estimate(std::span<const double> samples) {
    McEstimate e;
    e.n_samples = samples.size();
    if (samples.empty()) return e;
    // Neumaier summation: constant samples must give their value back exactly.
    double sum = 0.0, comp = 0.0;
    for (double v : samples) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    const double mean = (sum + comp) / static_cast<double>(samples.size());
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    e.value = mean;
    if (samples.size() > 1) {
        const double var = ss / static_cast<double>(samples.size() - 1);
        e.std_error = std::sqrt(var / static_cast<double>(samples.size()));
    }
    return e;
}

struct CharEstimate {
    McEstimate real;
    McEstimate imag;
};

namespace detail {

inline std::size_t grid_index(const PathEnsemble& ens, double t) {
    const auto i = ens.grid.index_of(t);
    if (!i) throw QueryError("probe time " + std::to_string(t) + " is not on the ensemble grid");
    return *i;
}

}  // namespace detail

// Mean of cos and sin of sum_k theta_k . B(t_k); thetas is n x d.
inline CharEstimate empirical_char(const PathEnsemble& ens, std::span<const double> times,
                                   std::span<const double> thetas) {
    if (thetas.size() != times.size() * ens.d) throw QueryError("thetas must have shape n_times x d");
    std::vector<std::size_t> idx;
    for (double t : times) idx.push_back(detail::grid_index(ens, t));
    std::vector<double> re(ens.n_paths), im(ens.n_paths);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        double phase = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            for (std::size_t c = 0; c < ens.d; ++c) phase += thetas[k * ens.d + c] * ens.at(p, idx[k], c);
        }
        re[p] = std::cos(phase);
        im[p] = std::sin(phase);
    }
    return {mc_estimate(re), mc_estimate(im)};
}

// E[B(t) B(s)] per path averaged over coordinates. The processes are
// centered, so no sample mean is subtracted.
inline McEstimate empirical_cov(const PathEnsemble& ens, double t, double s) {
    const std::size_t i = detail::grid_index(ens, t);
    const std::size_t j = detail::grid_index(ens, s);
    std::vector<double> v(ens.n_paths);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        double acc = 0.0;
        for (std::size_t c = 0; c < ens.d; ++c) acc += ens.at(p, i, c) * ens.at(p, j, c);
        v[p] = acc / static_cast<double>(ens.d);
    }
    return mc_estimate(v);
}

// E[B(t)^power] per path averaged over coordinates.
inline McEstimate empirical_moment(const PathEnsemble& ens, double t, int power) {
    const std::size_t i = detail::grid_index(ens, t);
    std::vector<double> v(ens.n_paths);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        double acc = 0.0;
        for (std::size_t c = 0; c < ens.d; ++c) acc += std::pow(ens.at(p, i, c), power);
        v[p] = acc / static_cast<double>(ens.d);
    }
    return mc_estimate(v);
}

// E[B(t)^(2n)] = (2n)! t^(2Hn) E[Y^n] / 2^n.
inline double ggbm_even_moment(double beta, double hurst, double t, int n) {
    const double gauss = std::exp(std::lgamma(2.0 * n + 1.0) - std::lgamma(n + 1.0) - n * std::log(2.0));
    return gauss * std::pow(t, 2.0 * hurst * n) * y_beta_moment(beta, n);
}

struct Probe {
    std::string description;
    double analytic = 0.0;
    McEstimate estimate;
    double z = 0.0;
    // Deterministic allowance added to the 3 SE band (lift quadrature error).
    double bias_allowance = 0.0;
    bool pass = false;
};

inline Probe make_probe(std::string description, double analytic, const McEstimate& est, double allowance = 0.0) {
    Probe p{std::move(description), analytic, est, 0.0, allowance, false};
    const double diff = est.value - analytic;
    // Degenerate samples (Y = 1 hook) leave only summation rounding.
    const double floor = 1e-12 * std::max(1.0, std::abs(analytic));
    if (est.std_error > 0.0) {
        p.z = diff / est.std_error;
    } else {
        p.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    p.pass = std::abs(diff) <= 3.0 * est.std_error + allowance + floor;
    return p;
}

struct LawReport {
    std::vector<Probe> probes;
    bool pass = false;
    std::uint64_t seed = 0;  // seed of the reported run
    bool retried = false;

    void finalize() {
        pass = std::all_of(probes.begin(), probes.end(), [](const Probe& p) { return p.pass; });
    }
};

enum class SuiteHook { none, unit_y, corrupted_y };

struct LawSuiteConfig {
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;
    GgbmMethod method = GgbmMethod::exact;
    Method exact_generator = Method::cholesky;
    std::optional<LiftConfig> lift;
    SuiteHook hook = SuiteHook::none;
    bool retry = true;
    Execution exec;
};

namespace detail {

inline LawReport law_suite_once(const GreyParams& params, const LawSuiteConfig& cfg, std::uint64_t seed) {
    const double h = params.hurst();
    const TimeGrid grid = TimeGrid::uniform(1.0, 4);
    GgbmOptions opt;
    opt.method = cfg.method;
    opt.exact_generator = cfg.exact_generator;
    opt.lift = cfg.lift;
    // Y = 1 turns every target into its Gaussian (beta = 1) form.
    double beta = params.beta();
    if (cfg.hook == SuiteHook::unit_y) {
        opt.y_hook = [](std::size_t, double) { return 1.0; };
        beta = 1.0;
    } else if (cfg.hook == SuiteHook::corrupted_y) {
        opt.y_hook = [](std::size_t, double y) { return 1.5 * y; };
    }
    const PathEnsemble ens = ggbm_paths(params, grid, cfg.n_paths, 1, seed, opt, cfg.exec);
    const GreyParams law = GreyParams::unchecked(beta, params.alpha());

    // Deterministic gap between the lift covariance and the fBm kernel.
    std::optional<LiftNodes> nodes;
    LiftAnchor anchor = LiftAnchor::stationary;
    if (cfg.method == GgbmMethod::lift) {
        const LiftConfig lc = cfg.lift.value_or(default_lift_config(h));
        nodes = build_nodes(h, regime_for_hurst(h), lc.m, lc.x_min, lc.x_max);
        anchor = lc.anchor;
    }
    auto cov_model = [&](double t, double s) {
        return nodes ? lift_covariance(*nodes, t, s, anchor) : fbm_kernel(h, t, s);
    };

    LawReport rep;
    rep.seed = seed;
    struct CharProbe {
        std::vector<double> times, thetas;
    };
    const std::vector<CharProbe> chars{{{1.0}, {1.0}},          {{0.5}, {2.0}},          {{0.25}, {3.0}},
                                       {{0.5, 1.0}, {1.0, -1.0}}, {{0.25, 0.75}, {1.5, 0.5}}, {{1.0}, {0.5}}};
    for (const auto& cp : chars) {
        GgbmLawQuery q{law, cp.times, cp.thetas, 1};
        const double target = ggbm_char(q);
        double allowance = 0.0;
        if (nodes) {
            double quad = 0.0, quad_exact = 0.0;
            for (std::size_t k = 0; k < cp.times.size(); ++k) {
                for (std::size_t j = 0; j < cp.times.size(); ++j) {
                    quad += cp.thetas[k] * cp.thetas[j] * cov_model(cp.times[k], cp.times[j]);
                    quad_exact += cp.thetas[k] * cp.thetas[j] * fbm_kernel(h, cp.times[k], cp.times[j]);
                }
            }
            allowance = std::abs(mittag_leffler_law(beta, -0.5 * quad).value -
                                 mittag_leffler_law(beta, -0.5 * quad_exact).value);
        }
        const CharEstimate est = empirical_char(ens, cp.times, cp.thetas);
        std::string label = "char t=";
        for (double t : cp.times) label += std::to_string(t).substr(0, 4) + " ";
        rep.probes.push_back(make_probe(label + "(real)", target, est.real, allowance));
        rep.probes.push_back(make_probe(label + "(imag)", 0.0, est.imag));
    }
    const double ey = y_beta_moment(beta, 1);
    for (auto [t, s] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.5, 1.0}, {0.25, 0.75}, {0.5, 0.5}}) {
        const double target = ey * fbm_kernel(h, t, s);
        const double allowance = ey * std::abs(cov_model(t, s) - fbm_kernel(h, t, s));
        rep.probes.push_back(make_probe("cov (" + std::to_string(t).substr(0, 4) + "," + std::to_string(s).substr(0, 4) + ")",
                                        target, empirical_cov(ens, t, s), allowance));
    }
    for (int n : {1, 2}) {
        const double target = ggbm_even_moment(beta, h, 1.0, n);
        double allowance = 0.0;
        if (nodes) {
            const double ratio = cov_model(1.0, 1.0);
            allowance = target * std::abs(std::pow(ratio, n) - 1.0);
        }
        rep.probes.push_back(make_probe("moment E[B(1)^" + std::to_string(2 * n) + "]", target,
                                        empirical_moment(ens, 1.0, 2 * n), allowance));
    }
    const std::vector<double>& y = *ens.y_values;
    for (double s : {0.5, 1.0, 2.0}) {
        std::vector<double> v(y.size());
        for (std::size_t p = 0; p < y.size(); ++p) v[p] = std::exp(-s * y[p]);
        rep.probes.push_back(make_probe("Y laplace s=" + std::to_string(s).substr(0, 3),
                                        mittag_leffler_law(beta, -s).value, mc_estimate(v)));
    }
    for (int n : {1, 2}) {
        std::vector<double> v(y.size());
        for (std::size_t p = 0; p < y.size(); ++p) v[p] = std::pow(y[p], n);
        rep.probes.push_back(make_probe("Y moment n=" + std::to_string(n), y_beta_moment(beta, n), mc_estimate(v)));
    }
    rep.finalize();
    return rep;
}

}  // namespace detail

// Fixed battery of characteristic-function, covariance, moment and
// subordinator probes on a 4-step grid over [0, 1]. A failing run is repeated
// once with a second seed when cfg.retry is set.
inline LawReport run_law_suite(const GreyParams& params, const LawSuiteConfig& cfg = {}) {
    LawReport rep = detail::law_suite_once(params, cfg, cfg.seed);
    if (!rep.pass && cfg.retry) {
        rep = detail::law_suite_once(params, cfg, cfg.seed + 0x9E3779B97F4A7C15ull);
        rep.retried = true;
    }
    return rep;
}

}  // namespace greylift
