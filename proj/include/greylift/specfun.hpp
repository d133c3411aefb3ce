#pragma once

// Mittag-Leffler, Wright and M-Wright functions on the real line.
//
// E_beta(-s), 0 < beta < 1, switches from the power series to the
// completely-monotone integral
//
//   E_beta(-s) = sin(beta pi) / (beta pi)
//                * int_0^inf exp(-(s u)^(1/beta)) / (u^2 + 2 u cos(beta pi) + 1) du
//
// once |z| exceeds SeriesPolicy::switch_radius. M_beta(x) switches from its
// alternating series to the Kanter-kernel integral
//
//   M_beta(x) = x^(beta/(1-beta)) / (1-beta)
//               * int_0^1 A(u) exp(-A(u) x^(1/(1-beta))) du
//
// where A is the kernel of the one-sided stable sampler (see
// stable_kernel_log). Both integrands are positive, so neither branch
// suffers cancellation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "greylift/error.hpp"
#include "greylift/quadrature.hpp"

namespace greylift {

struct SeriesPolicy {
    int max_terms = 2000;
    double abs_tol = 1e-13;
    // |z| above which E_beta(z), z < 0, uses the integral branch.
    double switch_radius = 1.0;
    // x above which M_beta(x) uses the integral branch.
    double mwright_series_limit = 1.0;

    void validate() const {
        if (max_terms < 1) throw ParameterError("max_terms", "must be >= 1");
        if (!(abs_tol > 0.0)) throw ParameterError("abs_tol", "must be > 0");
        if (!(switch_radius > 0.0)) throw ParameterError("switch_radius", "must be > 0");
        if (!(mwright_series_limit > 0.0)) throw ParameterError("mwright_series_limit", "must be > 0");
    }
};

// A value together with the absolute error estimate of the numerical method
// that produced it.
struct Evaluation {
    double value = 0.0;
    double residual = 0.0;
};

namespace detail {

// log|1/Gamma(x)| and its sign; sign 0 at the poles of Gamma.
inline double log_abs_rgamma(double x, int& sign) {
    if (x > 0.0) {
        sign = 1;
        return -std::lgamma(x);
    }
    if (x == std::floor(x)) {
        sign = 0;
        return -std::numeric_limits<double>::infinity();
    }
    // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    const double s = boost::math::sin_pi(x);
    sign = s > 0.0 ? 1 : -1;
    return std::lgamma(1.0 - x) + std::log(std::abs(s)) - std::log(std::numbers::pi);
}

// Upper envelope of log|1/Gamma(x)| that ignores the sine factor.
inline double log_rgamma_envelope(double x) {
    return x > 0.0 ? -std::lgamma(x) : std::lgamma(1.0 - x) - std::log(std::numbers::pi);
}

// Neumaier-compensated sum of sign_n * exp(logmag_n), n = 0, 1, ...
// term(n, logmag, sign, envelope) fills the log magnitude, sign and a log
// envelope that is eventually decreasing.
template <class Term>
Evaluation compensated_series(Term&& term, const SeriesPolicy& policy, const char* what) {
    double sum = 0.0;
    double comp = 0.0;
    double max_log = -std::numeric_limits<double>::infinity();
    double prev_env = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < policy.max_terms; ++n) {
        double logmag = 0.0;
        double envelope = 0.0;
        int sign = 0;
        term(n, logmag, sign, envelope);
        if (sign != 0) {
            const double v = sign * std::exp(logmag);
            const double t = sum + v;
            comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
            sum = t;
            max_log = std::max(max_log, logmag);
        }
        const bool decreasing = n > 0 && envelope < prev_env;
        prev_env = envelope;
        const double scale = std::max(std::abs(sum + comp), std::exp(max_log));
        if (decreasing && envelope < std::log(scale) - 41.0) {
            const double residual = std::exp(max_log) * std::numeric_limits<double>::epsilon() *
                                    std::sqrt(static_cast<double>(n + 1));
            if (residual > policy.abs_tol) {
                throw AccuracyError(std::string(what) + ": cancellation in the power series", residual);
            }
            return {sum + comp, residual};
        }
    }
    throw AccuracyError(std::string(what) + ": series did not converge within max_terms",
                        std::exp(prev_env));
}

inline Evaluation ml_negative_integral(double beta, double s) {
    const double pi = std::numbers::pi;
    const double c = std::cos(beta * pi);
    const double sn = std::sin(beta * pi);
    const double inv_beta = 1.0 / beta;
    auto f = [=](double u) {
        const double e = std::exp(-std::pow(s * u, inv_beta));
        return e / (u * u + 2.0 * u * c + 1.0);
    };
    const double u_end = std::pow(745.0, beta) / s;
    std::vector<double> pts{0.0, u_end};
    for (double k : {0.25, 1.0, 4.0}) {
        if (k / s < u_end) pts.push_back(k / s);
    }
    if (c < 0.0) {
        for (double p : {-c - sn, -c, -c + sn}) {
            if (p > 0.0 && p < u_end) pts.push_back(p);
        }
    }
    quad::Options opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;
    opt.max_intervals = 2000;
    const quad::Result r = quad::integrate_pieces(f, pts, opt);
    const double scale = sn / (beta * pi);
    return {scale * r.value, scale * r.error};
}

}  // namespace detail

// 1/Gamma(x), zero at the poles.
inline double rgamma(double x) {
    int sign = 0;
    const double l = detail::log_abs_rgamma(x, sign);
    return sign == 0 ? 0.0 : sign * std::exp(l);
}

// sum_n z^n / Gamma(beta n + rho), compensated. Throws AccuracyError when
// the alternating terms lose more than abs_tol to cancellation.
inline Evaluation ml_series(double beta, double rho, double z, const SeriesPolicy& policy = {}) {
    policy.validate();
    if (!(beta > 0.0)) throw ParameterError("beta", "must be > 0");
    const double logz = z == 0.0 ? 0.0 : std::log(std::abs(z));
    const int zsign = z < 0.0 ? -1 : 1;
    auto term = [&](int n, double& logmag, int& sign, double& env) {
        const double x = beta * n + rho;
        int gs = 0;
        const double lg = detail::log_abs_rgamma(x, gs);
        const double lz = n == 0 ? 0.0 : (z == 0.0 ? -std::numeric_limits<double>::infinity() : n * logz);
        logmag = lz + lg;
        sign = (z == 0.0 && n > 0) ? 0 : gs * ((zsign < 0 && (n % 2)) ? -1 : 1);
        env = lz + detail::log_rgamma_envelope(x);
    };
    return detail::compensated_series(term, policy, "mittag_leffler");
}

inline Evaluation mittag_leffler_eval(double beta, double z, const SeriesPolicy& policy = {}) {
    policy.validate();
    if (!(beta > 0.0)) throw ParameterError("beta", "must be > 0");
    if (beta == 1.0) return {std::exp(z), 0.0};
    if (z < -policy.switch_radius) {
        if (beta > 1.0) {
            return ml_series(beta, 1.0, z, policy);
        }
        return detail::ml_negative_integral(beta, -z);
    }
    return ml_series(beta, 1.0, z, policy);
}

// E_beta(z). For z < -switch_radius the integral branch requires beta <= 1;
// larger beta falls back to the series and may throw AccuracyError.
inline double mittag_leffler(double beta, double z, const SeriesPolicy& policy = {}) {
    return mittag_leffler_eval(beta, z, policy).value;
}

// E_{beta,rho}(z). rho = 1 is routed through mittag_leffler so that
// E_{beta,1} and E_beta agree bit for bit.
inline double gen_mittag_leffler(double beta, double rho, double z, const SeriesPolicy& policy = {}) {
    if (rho == 1.0) return mittag_leffler(beta, z, policy);
    return ml_series(beta, rho, z, policy).value;
}

// log A(u) for the Kanter representation of the one-sided beta-stable law,
// A(u) = [sin(beta pi u) / sin(pi u)]^(1/(1-beta)) * sin((1-beta) pi u) / sin(beta pi u).
// Increasing on (0, 1), from log((1-beta) beta^(beta/(1-beta))) to +inf.
inline double stable_kernel_log(double beta, double u) {
    using boost::math::sin_pi;
    const double sb = sin_pi(beta * u);
    const double s1 = sin_pi(u);
    const double sc = sin_pi((1.0 - beta) * u);
    return (std::log(sb) - std::log(s1)) / (1.0 - beta) + std::log(sc) - std::log(sb);
}

// Alternating series of M_beta. Accurate for moderate x only; throws
// AccuracyError when cancellation exceeds policy.abs_tol.
inline Evaluation m_wright_series(double beta, double x, const SeriesPolicy& policy = {}) {
    policy.validate();
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta", "must lie in (0,1)");
    if (!(x >= 0.0)) throw ParameterError("x", "must be >= 0");
    const double logx = x == 0.0 ? 0.0 : std::log(x);
    auto term = [&](int n, double& logmag, int& sign, double& env) {
        const double g = 1.0 - beta - beta * n;
        int gs = 0;
        const double lg = detail::log_abs_rgamma(g, gs);
        const double lx = n == 0 ? 0.0 : (x == 0.0 ? -std::numeric_limits<double>::infinity() : n * logx);
        const double lf = std::lgamma(n + 1.0);
        logmag = lx - lf + lg;
        sign = (x == 0.0 && n > 0) ? 0 : gs * ((n % 2) ? -1 : 1);
        env = lx - lf + detail::log_rgamma_envelope(g);
    };
    return detail::compensated_series(term, policy, "m_wright");
}

inline Evaluation m_wright_integral(double beta, double x) {
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta", "must lie in (0,1)");
    if (!(x > 0.0)) throw ParameterError("x", "must be > 0 for the integral branch");
    const double lx = std::log(x);
    const double log_scale = lx / (1.0 - beta);                     // log x^(1/(1-beta))
    const double log_pre = beta / (1.0 - beta) * lx - std::log1p(-beta);
    auto f = [=](double u) {
        const double la = stable_kernel_log(beta, u);
        const double e = log_pre + la - std::exp(la + log_scale);
        return std::exp(e);
    };
    // The integrand A e^{-A X} peaks where A(u) = 1/X.
    std::vector<double> pts{0.0, 1.0};
    const double target = -log_scale;
    double lo = 1e-12;
    double hi = 1.0 - 1e-12;
    if (stable_kernel_log(beta, lo) < target) {
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (stable_kernel_log(beta, mid) < target ? lo : hi) = mid;
        }
        const double peak = 0.5 * (lo + hi);
        pts.push_back(peak);
        if (peak > 0.25) pts.push_back(0.5 * peak);
        if (peak < 0.75) pts.push_back(0.5 * (1.0 + peak));
    }
    quad::Options opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;
    opt.max_intervals = 2000;
    const quad::Result r = quad::integrate_pieces(f, pts, opt);
    return {r.value, r.error};
}

inline Evaluation m_wright_eval(double beta, double x, const SeriesPolicy& policy = {}) {
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta", "must lie in (0,1)");
    if (!(x >= 0.0)) throw ParameterError("x", "must be >= 0");
    if (x <= policy.mwright_series_limit) return m_wright_series(beta, x, policy);
    return m_wright_integral(beta, x);
}

// M-Wright function M_beta(x), x >= 0: the density of Y_beta.
inline double m_wright(double beta, double x, const SeriesPolicy& policy = {}) {
    return m_wright_eval(beta, x, policy).value;
}

// (1/2) t^-beta M_beta(|x| t^-beta), a probability density in x.
inline double m_wright_2var(double beta, double x, double t, const SeriesPolicy& policy = {}) {
    if (!(t > 0.0)) throw ParameterError("t", "must be > 0");
    const double tb = std::pow(t, -beta);
    return 0.5 * tb * m_wright(beta, std::abs(x) * tb, policy);
}

// int_0^inf (2 pi tau)^(-k/2) exp(-q / (2 tau)) M_beta(tau) dtau: the density
// of sqrt(Y_beta) * N(0, Sigma) at a point with Mahalanobis square q, without
// the det(Sigma)^(-1/2) factor. k is the Gaussian dimension.
inline Evaluation gaussian_mixture(double beta, int k, double q, const SeriesPolicy& policy = {}) {
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta", "must lie in (0,1)");
    if (k < 1) throw ParameterError("dimension", "must be >= 1");
    if (!(q >= 0.0)) throw ParameterError("q", "must be >= 0");
    if (q == 0.0 && k >= 2) {
        throw DegenerateLawError("mixture density is unbounded at the origin for dimension >= 2");
    }
    const double half_k = 0.5 * k;
    const double log2pi = std::log(2.0 * std::numbers::pi);
    auto log_gauss = [=](double tau) { return -half_k * (log2pi + std::log(tau)) - q / (2.0 * tau); };
    // tau = w^2 on (0, 1] removes the tau^(-1/2) endpoint singularity.
    auto f_w = [&](double w) {
        const double tau = w * w;
        if (tau == 0.0) return 0.0;
        const double m = m_wright(beta, tau, policy);
        if (m <= 0.0) return 0.0;
        return 2.0 * w * std::exp(log_gauss(tau) + std::log(m));
    };
    auto f_tau = [&](double tau) {
        const double m = m_wright(beta, tau, policy);
        if (m <= 0.0) return 0.0;
        return std::exp(log_gauss(tau) + std::log(m));
    };
    const double peak = q / k;  // maximizer of the Gaussian factor in tau
    quad::Options opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-12;
    opt.max_intervals = 2000;

    std::vector<double> wpts{0.0, 1.0};
    if (peak > 0.0 && peak < 1.0) {
        wpts.push_back(std::sqrt(peak));
        wpts.push_back(std::sqrt(peak) * 0.5);
    }
    std::vector<double> tpts{1.0, std::numeric_limits<double>::infinity()};
    if (peak > 1.0) {
        tpts.push_back(peak);
        tpts.push_back(4.0 * peak);
    }
    const quad::Result a = quad::integrate_pieces(f_w, wpts, opt);
    const quad::Result b = quad::integrate_pieces(f_tau, tpts, opt);
    return {a.value + b.value, a.error + b.error};
}

// d-dimensional M-Wright density M^d_{beta/2}(y, t) by Gaussian subordination:
// int_0^inf (4 pi tau)^(-d/2) exp(-|y|^2 / (4 tau)) t^-beta M_beta(tau t^-beta) dtau.
// Normalized to integrate to 1 over R^d; for d = 1 it equals
// m_wright_2var(beta / 2, y, t).
inline Evaluation m_wright_d_eval(double beta, int d, std::span<const double> y, double t,
                                  const SeriesPolicy& policy = {}) {
    if (!(t > 0.0)) throw ParameterError("t", "must be > 0");
    if (d < 1) throw ParameterError("d", "must be >= 1");
    if (y.size() != static_cast<std::size_t>(d)) throw ParameterError("y", "length must equal d");
    double r2 = 0.0;
    for (double v : y) r2 += v * v;
    const double s = std::pow(t, beta);
    const Evaluation mix = gaussian_mixture(beta, d, r2 / (2.0 * s), policy);
    const double scale = std::pow(2.0 * s, -0.5 * d);
    return {scale * mix.value, scale * mix.residual};
}

inline double m_wright_d(double beta, int d, std::span<const double> y, double t,
                         const SeriesPolicy& policy = {}) {
    return m_wright_d_eval(beta, d, y, t, policy).value;
}

}  // namespace greylift
