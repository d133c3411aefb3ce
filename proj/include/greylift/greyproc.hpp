#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "greylift/error.hpp"
#include "greylift/fbm_exact.hpp"
#include "greylift/markov_lift.hpp"
#include "greylift/model.hpp"
#include "greylift/parallel.hpp"
#include "greylift/rng.hpp"
#include "greylift/sampling.hpp"
#include "greylift/specfun.hpp"

namespace greylift {

// int_0^t e^(-2 x (t-s)) ds = (1 - e^(-2xt)) / (2x), t at x = 0.
inline double f_norm_sq(double x, double t) {
    if (!(x >= 0.0)) throw ParameterError("x", "must be >= 0");
    if (!(t >= 0.0)) throw ParameterError("t", "must be >= 0");
    if (std::isinf(t)) return x > 0.0 ? 0.5 / x : t;
    return detail::exp_moments(2.0 * x, t).i0;
}

// int_0^t (t-s)^2 e^(-2 x (t-s)) ds
//   = (1 - e^(-2xt) (1 + 2xt + 2x^2 t^2)) / (4 x^3), t^3 / 3 at x = 0.
inline double g_norm_sq(double x, double t) {
    if (!(x >= 0.0)) throw ParameterError("x", "must be >= 0");
    if (!(t >= 0.0)) throw ParameterError("t", "must be >= 0");
    if (std::isinf(t)) return x > 0.0 ? 0.25 / (x * x * x) : t;
    return detail::exp_moments(2.0 * x, t).i2;
}

// E_beta with the Gaussian limit beta = 1 (E_1 = exp) available to test hooks.
inline Evaluation mittag_leffler_law(double beta, double z) {
    if (beta == 1.0) return {std::exp(z), 0.0};
    return mittag_leffler_eval(beta, z);
}

// Times t_1..t_n and an n x d array (row k is theta_k or the point y_k).
struct GgbmLawQuery {
    GreyParams params;
    std::vector<double> times;
    std::vector<double> values;
    std::size_t d = 1;

    std::size_t n() const noexcept { return times.size(); }

    void validate(bool for_density) const {
        if (times.empty()) throw ParameterError("times", "need at least one time");
        if (d < 1) throw ParameterError("d", "must be >= 1");
        if (values.size() != times.size() * d) throw ParameterError("values", "shape must be n x d");
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (!std::isfinite(times[k]) || times[k] < 0.0) throw ParameterError("times", "must be finite and >= 0");
            if (k > 0 && !(times[k] > times[k - 1])) throw ParameterError("times", "must be strictly increasing");
        }
        if (for_density && times.front() == 0.0) {
            throw DegenerateLawError("density queries need t > 0: the law at t = 0 is a point mass");
        }
    }

    double value(std::size_t k, std::size_t c) const { return values[k * d + c]; }
};

inline linalg::Matrix ggbm_gamma(double hurst, std::span<const double> times) {
    const auto n = static_cast<Eigen::Index>(times.size());
    linalg::Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) g(i, j) = g(j, i) = fbm_kernel(hurst, times[i], times[j]);
    }
    return g;
}

// E_beta(-1/2 sum_{k,j} (theta_k . theta_j) gamma(t_k, t_j)).
inline Evaluation ggbm_char_eval(const GgbmLawQuery& q) {
    q.validate(false);
    const linalg::Matrix g = ggbm_gamma(q.params.hurst(), q.times);
    double quad = 0.0;
    for (std::size_t k = 0; k < q.n(); ++k) {
        for (std::size_t j = 0; j < q.n(); ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < q.d; ++c) dot += q.value(k, c) * q.value(j, c);
            quad += dot * g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
        }
    }
    return mittag_leffler_law(q.params.beta(), -0.5 * quad);
}

inline double ggbm_char(const GgbmLawQuery& q) { return ggbm_char_eval(q).value; }

// Joint density of (B(t_1), ..., B(t_n)) in R^(n d): the M_beta mixture of
// N(0, tau Gamma (x) I_d).
inline Evaluation ggbm_density_eval(const GgbmLawQuery& q) {
    q.validate(true);
    const linalg::Matrix g = ggbm_gamma(q.params.hurst(), q.times);
    Eigen::LLT<linalg::Matrix> llt(g);
    if (llt.info() != Eigen::Success) {
        throw NumericalRankError("ggbm_density: covariance matrix is singular", linalg::detail::failing_pivot(g));
    }
    const auto n = static_cast<Eigen::Index>(q.n());
    double maha = 0.0;
    for (std::size_t c = 0; c < q.d; ++c) {
        linalg::Vector y(n);
        for (Eigen::Index k = 0; k < n; ++k) y(k) = q.value(static_cast<std::size_t>(k), c);
        maha += llt.matrixL().solve(y).squaredNorm();
    }
    double logdet = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) logdet += 2.0 * std::log(llt.matrixL()(k, k));
    const int dim = static_cast<int>(q.n() * q.d);
    const double det_factor = std::exp(-0.5 * static_cast<double>(q.d) * logdet);
    if (q.params.beta() == 1.0) {
        const double log_gauss = -0.5 * dim * std::log(2.0 * std::numbers::pi) - 0.5 * maha;
        return {det_factor * std::exp(log_gauss), 0.0};
    }
    const Evaluation mix = gaussian_mixture(q.params.beta(), dim, maha);
    return {det_factor * mix.value, det_factor * mix.residual};
}

inline double ggbm_density(const GgbmLawQuery& q) { return ggbm_density_eval(q).value; }

enum class GgbmMethod { exact, lift };

// Transforms the drawn Y of path p. Verification hooks use it to pin Y = 1 or
// to corrupt the subordinator.
using YHook = std::function<double(std::size_t path, double y)>;

struct GgbmOptions {
    GgbmMethod method = GgbmMethod::exact;
    Method exact_generator = Method::cholesky;  // cholesky, circulant or mvn
    MvnConfig mvn;
    // Unset fields fall back to default_lift_config(H).
    std::optional<LiftConfig> lift;
    YHook y_hook;
    StableSamplerConfig sampler;
};

// Draws Y for every path from subordinator_stream(seed, p) and scales path p
// of the Gaussian ensemble by sqrt(Y).
inline void subordinate(PathEnsemble& ens, double beta, const YHook& hook, const StableSamplerConfig& sampler) {
    std::vector<double> y(ens.n_paths);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        RngStream rng = subordinator_stream(ens.seed, p);
        y[p] = beta == 1.0 ? 1.0 : sample_y_beta(beta, rng, sampler);
        if (hook) y[p] = hook(p, y[p]);
        if (!(y[p] > 0.0)) throw ParameterError("y_hook", "subordinator values must be > 0");
        const double r = std::sqrt(y[p]);
        const std::size_t stride = ens.n_times() * ens.d;
        for (std::size_t k = 0; k < stride; ++k) ens.values[p * stride + k] *= r;
    }
    ens.beta = beta;
    ens.y_values = std::move(y);
}

inline PathEnsemble ggbm_paths(const GreyParams& params, const TimeGrid& grid, std::size_t n_paths, std::size_t d,
                               std::uint64_t seed, const GgbmOptions& opt = {}, const Execution& exec = {}) {
    const double h = params.hurst();
    PathEnsemble ens;
    if (opt.method == GgbmMethod::exact) {
        switch (opt.exact_generator) {
            case Method::cholesky: ens = fbm_cholesky(h, grid, n_paths, d, seed, exec); break;
            case Method::circulant: ens = fbm_circulant(h, grid, n_paths, d, seed, exec); break;
            case Method::mvn: ens = fbm_mvn(h, grid, n_paths, d, seed, opt.mvn, exec); break;
            default: throw ParameterError("exact_generator", "must be cholesky, circulant or mvn");
        }
    } else {
        if (params.alpha() == 1.0) throw ParameterError("alpha", "the lift needs alpha != 1");
        const LiftConfig cfg = opt.lift.value_or(default_lift_config(h));
        const LiftNodes nodes = build_nodes(h, regime_for_hurst(h), cfg.m, cfg.x_min, cfg.x_max);
        ens = simulate_bank(nodes, grid, n_paths, d, seed, cfg, exec).paths;
    }
    subordinate(ens, params.beta(), opt.y_hook, opt.sampler);
    return ens;
}

enum class GreyOURegime { rough_Z, smooth_W };

struct GreyOUQuery {
    double beta = 0.5;
    double x = 0.0;
    double t = 1.0;
    std::size_t d = 1;
    GreyOURegime regime = GreyOURegime::rough_Z;

    void validate() const {
        if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("beta", "must lie in (0,1]");
        if (!(x >= 0.0)) throw ParameterError("x", "must be >= 0");
        if (!(t > 0.0)) throw ParameterError("t", "must be > 0");
        if (d < 1) throw ParameterError("d", "must be >= 1");
    }

    // |f_x(t, .)|^2 or |g_x(t, .)|^2
    double norm_sq() const { return regime == GreyOURegime::rough_Z ? f_norm_sq(x, t) : g_norm_sq(x, t); }
};

inline Evaluation grey_ou_char_eval(const GreyOUQuery& q, std::span<const double> k) {
    q.validate();
    if (k.size() != q.d) throw ParameterError("k", "length must equal d");
    double k2 = 0.0;
    for (double v : k) k2 += v * v;
    return mittag_leffler_law(q.beta, -0.5 * k2 * q.norm_sq());
}

inline double grey_ou_char(const GreyOUQuery& q, std::span<const double> k) {
    return grey_ou_char_eval(q, k).value;
}

// 2^(d/2) M^d_{beta/2}(sqrt(2) y, N^(1/beta)): the density of sqrt(Y) N(0, N I_d).
inline Evaluation grey_ou_density_eval(const GreyOUQuery& q, std::span<const double> y) {
    q.validate();
    if (y.size() != q.d) throw ParameterError("y", "length must equal d");
    const double n = q.norm_sq();
    if (!(n > 0.0)) throw DegenerateLawError("grey_ou_density: zero variance, the law is a point mass");
    if (q.beta == 1.0) {
        double r2 = 0.0;
        for (double v : y) r2 += v * v;
        const double dd = static_cast<double>(q.d);
        return {std::exp(-0.5 * dd * std::log(2.0 * std::numbers::pi * n) - 0.5 * r2 / n), 0.0};
    }
    std::vector<double> scaled(y.begin(), y.end());
    for (double& v : scaled) v *= std::sqrt(2.0);
    const Evaluation m = m_wright_d_eval(q.beta, static_cast<int>(q.d), scaled, std::pow(n, 1.0 / q.beta));
    const double pre = std::pow(2.0, 0.5 * static_cast<double>(q.d));
    return {pre * m.value, pre * m.residual};
}

inline double grey_ou_density(const GreyOUQuery& q, std::span<const double> y) {
    return grey_ou_density_eval(q, y).value;
}

// Z_x = sqrt(Y) X_x (rough_Z) or W_x = sqrt(Y) Q_x (smooth_W), each factor
// started at 0 and stepped exactly.
inline PathEnsemble grey_ou_paths(double beta, double x, const TimeGrid& grid, std::size_t n_paths, std::size_t d,
                                  GreyOURegime regime, std::uint64_t seed, const YHook& hook = {},
                                  const Execution& exec = {}) {
    if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("beta", "must lie in (0,1]");
    if (!(x >= 0.0)) throw ParameterError("x", "must be >= 0");
    LiftNodes node;
    node.regime = regime == GreyOURegime::rough_Z ? Regime::rough : Regime::smooth;
    node.hurst = 0.5;
    node.prefactor = 1.0;
    node.nodes = {x};
    node.weights = {1.0};
    node.edges = {x, x};
    LiftConfig cfg;
    cfg.anchor = LiftAnchor::zero_start;
    PathEnsemble ens = detail::simulate_factors(node, grid, n_paths, d, seed, cfg, exec).paths;
    ens.alpha = 1.0;
    subordinate(ens, beta, hook, {});
    return ens;
}

}  // namespace greylift
