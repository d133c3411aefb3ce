#pragma once

// Markovian lift of fractional Brownian motion.
//
// For u > 0 the power kernel is a Laplace mixture of exponentials,
//
//   u^(H-1/2) / Gamma(H+1/2) = c_rough   int_0^inf e^(-x u) x^(-H-1/2) dx,          H < 1/2
//                            = c_smooth u int_0^inf e^(-x u) x^(-(H-1/2)) dx,        H > 1/2
//
// with c_rough = cos(pi H) / pi and c_smooth = 1 / (Gamma(H+1/2) Gamma(3/2-H)).
// Discretizing the x-integral on a geometric grid turns the moving-average
// representation of fBm into a finite sum of Ornstein-Uhlenbeck factors
// driven by one Brownian motion:
//
//   X_x(t) = int e^(-x (t-s)) dW(s),   Q_x(t) = int (t-s) e^(-x (t-s)) dW(s).
//
// Two anchors are offered. zero_start integrates from s = 0 only and
// reproduces int_0^t (t-s)^(H-1/2) dW(s) / Gamma(H+1/2), the
// Riemann-Liouville process, which is not an fBm. stationary integrates from
// -infinity, starts every factor in its stationary law and reports
// scale * sum_i w_i (F_i(t) - F_i(0)): this is the Mandelbrot-van Ness
// moving average and converges to normalized fBm.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "greylift/error.hpp"
#include "greylift/linalg.hpp"
#include "greylift/model.hpp"
#include "greylift/parallel.hpp"
#include "greylift/quadrature.hpp"
#include "greylift/rng.hpp"

namespace greylift {

enum class Regime { rough, smooth };

enum class LiftAnchor { stationary, zero_start };

inline const char* to_string(Regime r) { return r == Regime::rough ? "rough" : "smooth"; }

inline Regime regime_for_hurst(double hurst) {
    validate_hurst(hurst);
    if (hurst == 0.5) throw ParameterError("hurst", "the lift needs H != 1/2");
    return hurst < 0.5 ? Regime::rough : Regime::smooth;
}

struct LiftNodes {
    Regime regime = Regime::rough;
    double hurst = 0.25;
    double prefactor = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> edges;  // m + 1 cell boundaries

    std::size_t size() const noexcept { return nodes.size(); }
    double x_min() const { return edges.front(); }
    double x_max() const { return edges.back(); }
};

// Exponent p of the measure x^(-p) dx.
inline double measure_exponent(double hurst, Regime regime) {
    return regime == Regime::rough ? hurst + 0.5 : hurst - 0.5;
}

inline double lift_prefactor(double hurst, Regime regime) {
    if (regime == Regime::rough) return std::cos(std::numbers::pi * hurst) / std::numbers::pi;
    return std::exp(-std::lgamma(hurst + 0.5) - std::lgamma(1.5 - hurst));
}

inline LiftNodes build_nodes(double hurst, Regime regime, std::size_t m, double x_min, double x_max) {
    if (regime_for_hurst(hurst) != regime) {
        throw ParameterError("regime", std::string("hurst ") + std::to_string(hurst) +
                                           " does not belong to the " + to_string(regime) + " regime");
    }
    if (m < 2) throw ParameterError("m", "need at least 2 nodes");
    if (!(x_min > 0.0 && x_max > x_min && std::isfinite(x_max))) {
        throw ParameterError("x_range", "need 0 < x_min < x_max < inf");
    }
    LiftNodes out;
    out.regime = regime;
    out.hurst = hurst;
    out.prefactor = lift_prefactor(hurst, regime);
    out.nodes.resize(m);
    out.weights.resize(m);
    out.edges.resize(m + 1);
    const double l0 = std::log(x_min);
    const double step = (std::log(x_max) - l0) / static_cast<double>(m);
    for (std::size_t k = 0; k <= m; ++k) out.edges[k] = std::exp(l0 + step * static_cast<double>(k));
    out.edges.front() = x_min;
    out.edges.back() = x_max;
    const double q = 1.0 - measure_exponent(hurst, regime);  // > 0 in both regimes
    for (std::size_t i = 0; i < m; ++i) {
        const double la = l0 + step * static_cast<double>(i);
        out.nodes[i] = std::exp(la + 0.5 * step);
        // int_a^b x^(q-1) dx = a^q (e^(q step) - 1) / q
        out.weights[i] = std::exp(q * la) * std::expm1(q * step) / q;
    }
    return out;
}

// Approximates u^(H-1/2) / Gamma(H+1/2).
inline double kernel_approx(const LiftNodes& nodes, double u) {
    if (!(u > 0.0)) throw ParameterError("u", "must be > 0");
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += nodes.weights[i] * std::exp(-nodes.nodes[i] * u);
    return nodes.prefactor * (nodes.regime == Regime::smooth ? u * s : s);
}

// Multiplies the synthesized sum so that the stationary anchor targets
// normalized fBm: sqrt(sin(pi H) Gamma(2H+1)).
inline double lift_scale(double hurst, LiftAnchor anchor) {
    if (anchor == LiftAnchor::zero_start) return 1.0;
    return std::exp(0.5 * (std::log(std::sin(std::numbers::pi * hurst)) + std::lgamma(2.0 * hurst + 1.0)));
}

namespace detail {

// I_n(a, dt) = int_0^dt v^n e^(-a v) dv for n = 0, 1, 2. e = e^(-a dt) and
// one_minus_e = 1 - e are passed in so callers can form them stably.
struct ExpMoments {
    double i0, i1, i2;
};

inline ExpMoments exp_moments(double a, double dt, double e, double one_minus_e) {
    const double y = a * dt;
    if (y < 1.0) {
        double term = 1.0;
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (int k = 0; k < 40; ++k) {
            s0 += term / (k + 1);
            s1 += term / (k + 2);
            s2 += term / (k + 3);
            if (std::abs(term) < 1e-18) break;
            term *= -y / (k + 1);
        }
        return {dt * s0, dt * dt * s1, dt * dt * dt * s2};
    }
    if (std::isinf(dt)) return {1.0 / a, 1.0 / (a * a), 2.0 / (a * a * a)};
    return {one_minus_e / a, (one_minus_e - e * y) / (a * a),
            (2.0 * one_minus_e - e * y * (2.0 + y)) / (a * a * a)};
}

inline ExpMoments exp_moments(double a, double dt) {
    if (std::isinf(dt)) return exp_moments(a, dt, 0.0, 1.0);
    return exp_moments(a, dt, std::exp(-a * dt), -std::expm1(-a * dt));
}

}  // namespace detail

// Covariance of the synthesized process at (t, s): closed-form sums over
// node pairs. zero_start covers int_0^(t^s); stationary adds the
// contribution of the noise before time 0.
inline double lift_covariance(const LiftNodes& nodes, double t, double s,
                              LiftAnchor anchor = LiftAnchor::stationary) {
    if (!(t >= 0.0 && s >= 0.0)) throw ParameterError("t", "times must be >= 0");
    if (t == 0.0 || s == 0.0) return 0.0;
    const std::size_t m = nodes.size();
    const double mn = std::min(t, s);
    const double p = t - mn;
    const double q = s - mn;
    const bool smooth = nodes.regime == Regime::smooth;
    const auto& x = nodes.nodes;
    const auto& w = nodes.weights;
    std::vector<double> ep(m), eq(m), em(m), e1(m), bt(m), bs(m), at(m), as(m);
    for (std::size_t i = 0; i < m; ++i) {
        ep[i] = std::exp(-x[i] * p);
        eq[i] = std::exp(-x[i] * q);
        e1[i] = std::expm1(-x[i] * mn);
        em[i] = 1.0 + e1[i];
        bt[i] = std::expm1(-x[i] * t);
        bs[i] = std::expm1(-x[i] * s);
        at[i] = t * std::exp(-x[i] * t);
        as[i] = s * std::exp(-x[i] * s);
    }
    const bool stationary = anchor == LiftAnchor::stationary;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double a = x[i] + x[j];
            const double one_minus = -(e1[i] + e1[j] + e1[i] * e1[j]);
            const detail::ExpMoments im = detail::exp_moments(a, mn, em[i] * em[j], one_minus);
            double c;
            if (!smooth) {
                c = ep[i] * eq[j] * im.i0;
                if (stationary) c += bt[i] * bs[j] / a;
            } else {
                c = ep[i] * eq[j] * (p * q * im.i0 + (p + q) * im.i1 + im.i2);
                if (stationary) {
                    c += at[i] * as[j] / a + (at[i] * bs[j] + bt[i] * as[j]) / (a * a) +
                         2.0 * bt[i] * bs[j] / (a * a * a);
                }
            }
            row += w[j] * c;
        }
        total += w[i] * row;
    }
    const double k = nodes.prefactor * lift_scale(nodes.hurst, anchor);
    return k * k * total;
}

// Covariance the lift converges to: fBm for the stationary anchor, the
// Riemann-Liouville process int_0^t (t-u)^(H-1/2) dW(u) / Gamma(H+1/2) for
// zero_start.
inline double lift_target_covariance(double hurst, double t, double s, LiftAnchor anchor);

// Sup over the (t, s) probes of |lift - target| / target.
inline double lift_sup_relative_error(const LiftNodes& nodes, const std::vector<double>& times,
                                      LiftAnchor anchor = LiftAnchor::stationary) {
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double exact = lift_target_covariance(nodes.hurst, times[i], times[j], anchor);
            const double approx = lift_covariance(nodes, times[i], times[j], anchor);
            worst = std::max(worst, std::abs(approx - exact) / std::abs(exact));
        }
    }
    return worst;
}

// Closed-form value of int_0^inf (1 ^ x^(-k/2)) mu(dx) for the lift measure
// (k = 1 rough, k = 3 smooth): 1/(1/2-H) + 1/H rough, 1/(3/2-H) + 1/H smooth.
inline double integrability_value(double hurst, Regime regime) {
    if (regime == Regime::rough) {
        if (!(hurst > 0.0 && hurst < 0.5)) {
            throw DivergenceError("rough integrability condition diverges unless 0 < H < 1/2");
        }
        return 1.0 / (0.5 - hurst) + 1.0 / hurst;
    }
    if (!(hurst > 0.5 && hurst < 1.0)) {
        throw DivergenceError("smooth integrability condition diverges unless 1/2 < H < 1");
    }
    return 1.0 / (1.5 - hurst) + 1.0 / hurst;
}

// Bound on the part of int sqrt(int_0^T G_x(s)^2 ds) mu(dx) lying outside
// [x_min, x_max], with mu the unnormalized lift measure (no prefactor).
inline double truncation_bound(double hurst, Regime regime, double x_min, double x_max, double horizon) {
    if (regime_for_hurst(hurst) != regime) throw ParameterError("regime", "does not match hurst");
    if (!(x_min > 0.0 && x_max > x_min)) throw ParameterError("x_range", "need 0 < x_min < x_max");
    if (!(horizon > 0.0)) throw ParameterError("horizon", "must be > 0");
    // sqrt of the elementary bound: c_T * (1 ^ x^(-k/2)), mu(dx) = x^(-p) dx.
    const bool rough = regime == Regime::rough;
    const double c_t = rough ? std::sqrt(std::max(1.0, 2.0 * horizon) / 2.0)
                             : 0.5 * std::sqrt(std::max(1.0, 8.0 * horizon * horizon * horizon));
    const double p = measure_exponent(hurst, regime);
    const double lo_exp = 1.0 - p;              // int x^(-p) = x^(1-p) / (1-p) near 0
    const double hi_exp = (rough ? 0.5 : 1.5) + p - 1.0;  // int x^(-k/2-p) = x^-H / H near inf
    auto below = [&](double b) {  // int_0^b
        if (b <= 1.0) return std::pow(b, lo_exp) / lo_exp;
        return 1.0 / lo_exp + (1.0 - std::pow(b, -hi_exp)) / hi_exp;
    };
    auto above = [&](double a) {  // int_a^inf
        if (a >= 1.0) return std::pow(a, -hi_exp) / hi_exp;
        return (1.0 - std::pow(a, lo_exp)) / lo_exp + 1.0 / hi_exp;
    };
    return c_t * (below(x_min) + above(x_max));
}

struct LiftConfig {
    std::size_t m = 200;
    double x_min = 1e-4;
    double x_max = 1e4;
    LiftAnchor anchor = LiftAnchor::stationary;
    // false drives every node by its own Brownian motion (negative control).
    bool shared_noise = true;
    // Eigen-directions of the correlation-scaled step covariance below
    // rank_tol * lambda_max are dropped.
    double rank_tol = 1e-14;
};

// Doubles m and the log-width of [x_min, x_max] about its geometric center,
// keeping the node density per decade fixed.
inline LiftConfig double_config(LiftConfig cfg) {
    const double c = 0.5 * (std::log(cfg.x_min) + std::log(cfg.x_max));
    const double half = 0.5 * (std::log(cfg.x_max) - std::log(cfg.x_min));
    cfg.m *= 2;
    cfg.x_min = std::exp(c - 2.0 * half);
    cfg.x_max = std::exp(c + 2.0 * half);
    return cfg;
}

// Coarsest rung of the refinement ladder. At fixed node density the error
// first falls with the range and then settles on the density floor of the
// midpoint rule; these bases keep all four rungs on the falling side.
// Node ranges scale with 1/horizon, which leaves relative errors on
// [0.1 T, T] unchanged.
inline LiftConfig lift_ladder_base(double hurst, double horizon = 1.0) {
    if (!(horizon > 0.0)) throw ParameterError("horizon", "must be > 0");
    LiftConfig cfg;
    if (regime_for_hurst(hurst) == Regime::rough) {
        cfg.m = 120;  // 20 per decade on [1e-4, 1e2]
        cfg.x_min = 1e-4;
        cfg.x_max = 1e2;
    } else {
        cfg.m = 75;  // 25 per decade on [1e-2, 1e1]
        cfg.x_min = 1e-2;
        cfg.x_max = 1e1;
    }
    cfg.x_min /= horizon;
    cfg.x_max /= horizon;
    return cfg;
}

// Second doubling of the ladder base: m = 480 on [1e-13, 1e11] (rough) and
// m = 300 on [10^-6.5, 10^5.5] (smooth), both below 1e-2 sup relative
// covariance error on [0.1, 1]^2.
inline LiftConfig default_lift_config(double hurst, double horizon = 1.0) {
    return double_config(double_config(lift_ladder_base(hurst, horizon)));
}

// Factor values at the last grid time, layout [path][coord][row] with rows
// X_1..X_m (rough) or X_1..X_m, Q_1..Q_m (smooth).
struct OUBank {
    Regime regime = Regime::rough;
    std::size_t m = 0;
    std::size_t n_paths = 0;
    std::size_t d = 1;
    bool shared_noise = true;
    std::vector<double> state;
    TimeGrid grid;
};

struct LiftSimulation {
    OUBank bank;
    PathEnsemble paths;
    std::size_t noise_rank = 0;  // rank of the per-step noise factor
};

namespace detail {

// Joint covariance of the factor noise over a step dt (dt = inf gives the
// stationary law). Rows X_1..X_m then, for smooth, Q_1..Q_m.
inline linalg::Matrix bank_noise_covariance(const LiftNodes& nodes, double dt, bool shared) {
    const auto m = static_cast<Eigen::Index>(nodes.size());
    const bool smooth = nodes.regime == Regime::smooth;
    const Eigen::Index k = smooth ? 2 * m : m;
    linalg::Matrix c = linalg::Matrix::Zero(k, k);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            if (!shared && i != j) continue;
            const ExpMoments im = exp_moments(nodes.nodes[i] + nodes.nodes[j], dt);
            c(i, j) = c(j, i) = im.i0;
            if (smooth) {
                c(m + i, j) = c(j, m + i) = im.i1;
                c(i, m + j) = c(m + j, i) = im.i1;
                c(m + i, m + j) = c(m + j, m + i) = im.i2;
            }
        }
    }
    return c;
}

// Factor of a covariance computed in correlation units, so that rank
// truncation is relative per row rather than to the largest variance.
inline linalg::GaussianFactor scaled_factor(const linalg::Matrix& c, double rank_tol) {
    const linalg::Vector sd = c.diagonal().cwiseSqrt();
    const linalg::Vector inv = sd.unaryExpr([](double v) { return v > 0.0 ? 1.0 / v : 0.0; });
    const linalg::Matrix corr = inv.asDiagonal() * c * inv.asDiagonal();
    linalg::GaussianFactor f = linalg::gaussian_factor(corr, rank_tol);
    f.factor = sd.asDiagonal() * f.factor;
    return f;
}

}  // namespace detail

namespace detail {

// Exact stepping of an arbitrary node set; simulate_bank adds the
// integrability gate on top.
inline LiftSimulation simulate_factors(const LiftNodes& nodes, const TimeGrid& grid, std::size_t n_paths,
                                       std::size_t d, std::uint64_t seed, const LiftConfig& cfg,
                                       const Execution& exec) {
    if (n_paths < 1) throw ParameterError("n_paths", "must be >= 1");
    if (d < 1) throw ParameterError("d", "must be >= 1");
    const std::size_t m = nodes.size();
    const bool smooth = nodes.regime == Regime::smooth;
    const auto k = static_cast<Eigen::Index>(smooth ? 2 * m : m);
    const bool stationary = cfg.anchor == LiftAnchor::stationary;

    // Step sizes: from 0 to the first grid time, then between grid times.
    std::vector<double> steps;
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double dt = grid[i] - prev;
        if (i > 0 && grid.is_uniform()) dt = grid.step();
        steps.push_back(dt);
        prev = grid[i];
    }
    std::map<double, linalg::GaussianFactor> factors;
    std::size_t rank = 0;
    for (double dt : steps) {
        if (dt <= 0.0 || factors.count(dt)) continue;
        auto f = detail::scaled_factor(detail::bank_noise_covariance(nodes, dt, cfg.shared_noise), cfg.rank_tol);
        rank = std::max(rank, f.rank);
        factors.emplace(dt, std::move(f));
    }
    linalg::Matrix init;
    if (stationary) {
        init = detail::scaled_factor(
                   detail::bank_noise_covariance(nodes, std::numeric_limits<double>::infinity(), cfg.shared_noise),
                   cfg.rank_tol)
                   .factor;
    }

    linalg::Vector out_w(k);
    out_w.setZero();
    const double amp = nodes.prefactor * lift_scale(nodes.hurst, cfg.anchor);
    for (std::size_t i = 0; i < m; ++i) out_w(static_cast<Eigen::Index>(smooth ? m + i : i)) = amp * nodes.weights[i];

    PathEnsemble ens(grid, n_paths, d, smooth ? Method::lift_smooth : Method::lift_rough, seed,
                     2.0 * nodes.hurst);
    OUBank bank{nodes.regime, m, n_paths, d, cfg.shared_noise, std::vector<double>(n_paths * d * k), grid};

    parallel_chunks(n_paths, 128, exec, [&](std::size_t begin, std::size_t end) {
        const std::size_t np = end - begin;
        const auto cols = static_cast<Eigen::Index>(np * d);
        std::vector<RngStream> rng;
        rng.reserve(np);
        for (std::size_t p = begin; p < end; ++p) rng.push_back(path_stream(seed, p));
        auto draw = [&](Eigen::Index rows) {
            linalg::Matrix z(rows, cols);
            for (std::size_t p = 0; p < np; ++p) {
                for (std::size_t c = 0; c < d; ++c) {
                    const auto col = static_cast<Eigen::Index>(p * d + c);
                    for (Eigen::Index r = 0; r < rows; ++r) z(r, col) = rng[p].normal();
                }
            }
            return z;
        };
        // dev = F(t) - F(0); f0 = F(0).
        linalg::Matrix dev = linalg::Matrix::Zero(k, cols);
        linalg::Matrix f0 = linalg::Matrix::Zero(k, cols);
        if (stationary) f0 = init * draw(init.cols());
        const auto mm = static_cast<Eigen::Index>(m);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double dt = steps[i];
            if (dt > 0.0) {
                const linalg::GaussianFactor& f = factors.at(dt);
                linalg::Matrix noise = f.factor * draw(f.factor.cols());
                for (Eigen::Index r = 0; r < mm; ++r) {
                    const double x = nodes.nodes[static_cast<std::size_t>(r)];
                    const double e = std::exp(-x * dt);
                    const double em1 = std::expm1(-x * dt);
                    for (Eigen::Index c = 0; c < cols; ++c) {
                        const double xd = dev(r, c);
                        // (Phi - I) F(0) keeps the large stationary levels out of dev.
                        dev(r, c) = e * xd + em1 * f0(r, c) + noise(r, c);
                        if (smooth) {
                            const double qd = dev(mm + r, c);
                            dev(mm + r, c) = e * (qd + dt * xd) + e * dt * f0(r, c) + em1 * f0(mm + r, c) +
                                             noise(mm + r, c);
                        }
                    }
                }
            }
            const linalg::Vector level = dev.transpose() * out_w;
            for (std::size_t p = 0; p < np; ++p) {
                for (std::size_t c = 0; c < d; ++c) {
                    ens.at(begin + p, i, c) = grid[i] == 0.0 ? 0.0 : level(static_cast<Eigen::Index>(p * d + c));
                }
            }
        }
        for (std::size_t p = 0; p < np; ++p) {
            for (std::size_t c = 0; c < d; ++c) {
                const auto col = static_cast<Eigen::Index>(p * d + c);
                double* dst = bank.state.data() + ((begin + p) * d + c) * static_cast<std::size_t>(k);
                for (Eigen::Index r = 0; r < k; ++r) dst[r] = dev(r, col) + f0(r, col);
            }
        }
    });
    return {std::move(bank), std::move(ens), rank};
}

}  // namespace detail

// Simulates the OU bank exactly on the grid (any strictly increasing grid;
// one factorization per distinct step) and synthesizes the lift path.
inline LiftSimulation simulate_bank(const LiftNodes& nodes, const TimeGrid& grid, std::size_t n_paths,
                                    std::size_t d, std::uint64_t seed, const LiftConfig& cfg = {},
                                    const Execution& exec = {}) {
    integrability_value(nodes.hurst, nodes.regime);
    return detail::simulate_factors(nodes, grid, n_paths, d, seed, cfg, exec);
}

inline double lift_target_covariance(double hurst, double t, double s, LiftAnchor anchor) {
    if (t == 0.0 || s == 0.0) return 0.0;
    if (anchor == LiftAnchor::stationary) {
        const double a = 2.0 * hurst;
        return 0.5 * (std::pow(t, a) + std::pow(s, a) - std::pow(std::abs(t - s), a));
    }
    // int_0^mn (t-u)^(H-1/2) (s-u)^(H-1/2) du / Gamma(H+1/2)^2. With
    // v = (mn-u)^(H+1/2) the integrand is smooth: (gap + v^(1/p))^(H-1/2) / p.
    const double mn = std::min(t, s);
    const double gap = std::abs(t - s);
    const double p = hurst + 0.5;
    const double g2 = std::exp(2.0 * std::lgamma(p));
    if (gap == 0.0) return std::pow(mn, 2.0 * hurst) / (2.0 * hurst * g2);
    auto f = [=](double v) { return std::pow(gap + std::pow(v, 1.0 / p), hurst - 0.5) / p; };
    quad::Options opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-12;
    return quad::integrate(f, 0.0, std::pow(mn, p), opt).value / g2;
}

}  // namespace greylift
