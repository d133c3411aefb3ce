#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "greylift/error.hpp"
#include "greylift/linalg.hpp"
#include "greylift/model.hpp"
#include "greylift/parallel.hpp"
#include "greylift/rng.hpp"

namespace greylift {

inline double fbm_kernel(double hurst, double t, double s) {
    const double a = 2.0 * hurst;
    return 0.5 * (std::pow(t, a) + std::pow(s, a) - std::pow(std::abs(t - s), a));
}

struct CovarianceMatrix {
    linalg::Matrix entries;
    TimeGrid grid;
    double hurst = 0.5;
};

inline CovarianceMatrix fbm_covariance(double hurst, const TimeGrid& grid) {
    validate_hurst(hurst);
    const auto n = static_cast<Eigen::Index>(grid.size());
    CovarianceMatrix c{linalg::Matrix(n, n), grid, hurst};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = i == j ? std::pow(grid[i], 2.0 * hurst) : fbm_kernel(hurst, grid[i], grid[j]);
            c.entries(i, j) = c.entries(j, i) = v;
        }
    }
    return c;
}

namespace detail {

inline void check_ensemble_shape(std::size_t n_paths, std::size_t d) {
    if (n_paths < 1) throw ParameterError("n_paths", "must be >= 1");
    if (d < 1) throw ParameterError("d", "must be >= 1");
}

// Fills ens.at(p, first_row + r, c) = (factor * z)_r for every path and
// coordinate, z drawn from path_stream(seed, p) coordinate by coordinate.
inline void fill_from_factor(PathEnsemble& ens, const linalg::Matrix& factor, std::size_t first_row,
                             const Execution& exec) {
    const auto rows = factor.rows();
    const auto rank = factor.cols();
    const std::size_t d = ens.d;
    constexpr std::size_t chunk = 256;
    parallel_chunks(ens.n_paths, chunk, exec, [&](std::size_t begin, std::size_t end) {
        const auto cols = static_cast<Eigen::Index>((end - begin) * d);
        linalg::Matrix z(rank, cols);
        for (std::size_t p = begin; p < end; ++p) {
            RngStream rng = path_stream(ens.seed, p);
            for (std::size_t c = 0; c < d; ++c) {
                const auto col = static_cast<Eigen::Index>((p - begin) * d + c);
                for (Eigen::Index r = 0; r < rank; ++r) z(r, col) = rng.normal();
            }
        }
        const linalg::Matrix x = factor * z;
        for (std::size_t p = begin; p < end; ++p) {
            for (std::size_t c = 0; c < d; ++c) {
                const auto col = static_cast<Eigen::Index>((p - begin) * d + c);
                for (Eigen::Index r = 0; r < rows; ++r) ens.at(p, first_row + r, c) = x(r, col);
            }
        }
    });
}

}  // namespace detail

// Exact fBm by Cholesky factorization of the grid covariance. A leading
// t = 0 is held at exactly 0 and left out of the factorization.
inline PathEnsemble fbm_cholesky(double hurst, const TimeGrid& grid, std::size_t n_paths, std::size_t d,
                                 std::uint64_t seed, const Execution& exec = {}) {
    validate_hurst(hurst);
    detail::check_ensemble_shape(n_paths, d);
    PathEnsemble ens(grid, n_paths, d, Method::cholesky, seed, 2.0 * hurst);
    const std::size_t first = grid.starts_at_zero() ? 1 : 0;
    const std::size_t k = grid.size() - first;
    if (k == 0) return ens;
    const linalg::Matrix cov =
        fbm_covariance(hurst, grid).entries.bottomRightCorner(static_cast<Eigen::Index>(k),
                                                              static_cast<Eigen::Index>(k));
    linalg::Matrix l;
    try {
        l = linalg::cholesky_lower(cov);
    } catch (const NumericalRankError& e) {
        throw NumericalRankError("fbm_cholesky: covariance not positive definite", e.pivot() + first);
    }
    detail::fill_from_factor(ens, l, first, exec);
    return ens;
}

// fGn autocovariance at lag k for unit step.
inline double fgn_autocovariance(double hurst, double k) {
    const double a = 2.0 * hurst;
    k = std::abs(k);
    return 0.5 * (std::pow(k + 1.0, a) - 2.0 * std::pow(k, a) + std::pow(std::abs(k - 1.0), a));
}

// Eigenvalues of the minimal power-of-two circulant embedding of n_increments
// fGn lags, unclipped.
inline std::vector<double> circulant_eigenvalues(double hurst, std::size_t n_increments) {
    validate_hurst(hurst);
    if (n_increments < 1) throw ParameterError("n_increments", "must be >= 1");
    const std::size_t m = std::bit_ceil(n_increments);
    const std::size_t big_m = 2 * m;
    std::vector<double> row(big_m);
    for (std::size_t j = 0; j <= m; ++j) row[j] = fgn_autocovariance(hurst, static_cast<double>(j));
    for (std::size_t j = 1; j < m; ++j) row[big_m - j] = row[j];
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, row);
    std::vector<double> lam(big_m);
    for (std::size_t j = 0; j < big_m; ++j) lam[j] = spec[j].real();
    return lam;
}

// min eigenvalue / max eigenvalue of the embedding.
inline double circulant_eigenvalue_floor(double hurst, std::size_t n_increments) {
    const auto lam = circulant_eigenvalues(hurst, n_increments);
    const auto [lo, hi] = std::minmax_element(lam.begin(), lam.end());
    return *lo / *hi;
}

// Davies-Harte circulant embedding of fGn, cumulated onto the grid. The grid
// must be uniform with first time a multiple of the step; increments from
// t = 0 are generated internally and dropped before the first grid time.
inline PathEnsemble fbm_circulant(double hurst, const TimeGrid& grid, std::size_t n_paths, std::size_t d,
                                  std::uint64_t seed, const Execution& exec = {}) {
    validate_hurst(hurst);
    detail::check_ensemble_shape(n_paths, d);
    if (!grid.is_uniform()) throw ParameterError("grid", "circulant embedding requires a uniform grid");
    const std::size_t offset = grid.uniform_offset();
    const std::size_t n = grid.size();
    const std::size_t n_inc = offset + n - 1;
    const double dt = grid.step();

    std::vector<double> lam = circulant_eigenvalues(hurst, n_inc);
    const auto [lo, hi] = std::minmax_element(lam.begin(), lam.end());
    if (*lo < -1e-10 * *hi) {
        throw NumericalRankError("fbm_circulant: negative embedding eigenvalue",
                                 static_cast<std::size_t>(lo - lam.begin()));
    }
    const std::size_t big_m = lam.size();
    std::vector<double> amp(big_m);
    for (std::size_t j = 0; j < big_m; ++j) {
        amp[j] = std::sqrt(std::max(lam[j], 0.0) / static_cast<double>(big_m));
    }
    const double scale = std::pow(dt, hurst);

    PathEnsemble ens(grid, n_paths, d, Method::circulant, seed, 2.0 * hurst);
    parallel_chunks(n_paths, 64, exec, [&](std::size_t begin, std::size_t end) {
        Eigen::FFT<double> fft;
        std::vector<std::complex<double>> xi(big_m);
        std::vector<std::complex<double>> y;
        for (std::size_t p = begin; p < end; ++p) {
            RngStream rng = path_stream(seed, p);
            for (std::size_t c = 0; c < d; ++c) {
                for (std::size_t j = 0; j < big_m; ++j) {
                    const double re = rng.normal();
                    const double im = rng.normal();
                    xi[j] = amp[j] * std::complex<double>(re, im);
                }
                fft.fwd(y, xi);
                double level = 0.0;
                if (offset == 0) ens.at(p, 0, c) = 0.0;
                for (std::size_t k = 0; k < n_inc; ++k) {
                    level += scale * y[k].real();
                    const std::size_t step = k + 1;
                    if (step >= offset) ens.at(p, step - offset, c) = level;
                }
            }
        }
    });
    return ens;
}

// Normalizing constant of the Mandelbrot-van Ness moving average,
// kappa^2 = sin(pi H) Gamma(2H + 1) / Gamma(H + 1/2)^2, fixed by Var B(1) = 1.
inline double mvn_constant(double hurst) {
    validate_hurst(hurst);
    const double l = std::log(std::sin(std::numbers::pi * hurst)) + std::lgamma(2.0 * hurst + 1.0) -
                     2.0 * std::lgamma(hurst + 0.5);
    return std::exp(0.5 * l);
}

struct MvnConfig {
    double left_trunc = 0.0;  // 0 selects 50 * t_max
    int n_quad = 100;         // cells per unit time

    double resolved_left(double t_max) const { return left_trunc > 0.0 ? left_trunc : 50.0 * t_max; }
};

// Exact covariance of the discretized moving average: each cell carries an
// independent Brownian increment weighted by the cell average of
// kappa ((t - s)_+^(H-1/2) - (-s)_+^(H-1/2)) on [-left, t_max].
inline linalg::Matrix mvn_covariance(double hurst, const TimeGrid& grid, const MvnConfig& cfg = {}) {
    validate_hurst(hurst);
    if (cfg.left_trunc < 0.0) throw ParameterError("left_trunc", "must be > 0");
    if (cfg.n_quad < 2) throw ParameterError("n_quad", "must be >= 2");
    const double t_max = grid.back();
    const double left = cfg.resolved_left(std::max(t_max, 1e-300));
    const double h = 1.0 / cfg.n_quad;
    std::vector<double> pts;
    const auto n_cells = static_cast<std::size_t>(std::ceil((left + t_max) / h));
    pts.reserve(n_cells + grid.size() + 2);
    for (std::size_t k = 0; k <= n_cells; ++k) pts.push_back(std::min(-left + static_cast<double>(k) * h, t_max));
    pts.push_back(0.0);
    for (double t : grid.times()) pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const double p = hurst + 0.5;
    const double kappa = mvn_constant(hurst);
    // int_a^b (t - s)_+^(H-1/2) ds for a cell not straddling t.
    auto cell_mass = [p](double t, double a, double b) {
        if (a >= t) return 0.0;
        return (std::pow(t - a, p) - std::pow(t - b, p)) / p;
    };
    const auto n = static_cast<Eigen::Index>(grid.size());
    const auto cells = static_cast<Eigen::Index>(pts.size() - 1);
    linalg::Matrix g(n, cells);
    for (Eigen::Index c = 0; c < cells; ++c) {
        const double a = pts[c];
        const double b = pts[c + 1];
        const double root_len = std::sqrt(b - a);
        const double past = cell_mass(0.0, a, b);
        for (Eigen::Index i = 0; i < n; ++i) {
            g(i, c) = kappa * (cell_mass(grid[i], a, b) - past) / root_len;
        }
    }
    return g * g.transpose();
}

// Var of the discretized moving average minus the exact t^(2H), per grid time.
inline std::vector<double> mvn_variance_bias(double hurst, const TimeGrid& grid, const MvnConfig& cfg = {}) {
    const linalg::Matrix cov = mvn_covariance(hurst, grid, cfg);
    std::vector<double> bias(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        bias[i] = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) - std::pow(grid[i], 2.0 * hurst);
    }
    return bias;
}

// Mandelbrot-van Ness baseline. Draws the exact Gaussian law of the
// cell-averaged moving average through its grid covariance, which equals
// drawing one increment per cell but costs O(n^2) per path instead of
// O(n * cells).
inline PathEnsemble fbm_mvn(double hurst, const TimeGrid& grid, std::size_t n_paths, std::size_t d,
                            std::uint64_t seed, const MvnConfig& cfg = {}, const Execution& exec = {}) {
    detail::check_ensemble_shape(n_paths, d);
    const linalg::Matrix cov = mvn_covariance(hurst, grid, cfg);
    PathEnsemble ens(grid, n_paths, d, Method::mvn, seed, 2.0 * hurst);
    const std::size_t first = grid.starts_at_zero() ? 1 : 0;
    const auto k = static_cast<Eigen::Index>(grid.size() - first);
    if (k == 0) return ens;
    linalg::Matrix l;
    try {
        l = linalg::cholesky_lower(cov.bottomRightCorner(k, k));
    } catch (const NumericalRankError& e) {
        throw NumericalRankError("fbm_mvn: covariance not positive definite", e.pivot() + first);
    }
    detail::fill_from_factor(ens, l, first, exec);
    return ens;
}

}  // namespace greylift
