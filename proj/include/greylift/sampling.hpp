#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "greylift/error.hpp"
#include "greylift/rng.hpp"
#include "greylift/specfun.hpp"

namespace greylift {

enum class StableMethod { kanter_zolotarev };

struct StableSamplerConfig {
    StableMethod method = StableMethod::kanter_zolotarev;
    // Uniform draws are clamped to (guard_eps, 1 - guard_eps).
    double guard_eps = 1e-12;

    void validate() const {
        if (!(guard_eps > 0.0 && guard_eps < 1e-6)) {
            throw ParameterError("guard_eps", "must lie in (0, 1e-6)");
        }
    }
};

inline std::vector<double> sample_gaussian(RngStream& stream, std::size_t n) {
    if (n < 1) throw ParameterError("n", "must be >= 1");
    std::vector<double> out(n);
    for (auto& v : out) v = stream.normal();
    return out;
}

namespace detail {

inline void check_stable_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta", "must lie in the open interval (0,1)");
}

// log A(U) - log E for one Kanter draw.
inline double kanter_log_ratio(double beta, RngStream& stream, const StableSamplerConfig& cfg) {
    double u = stream.uniform();
    u = std::min(std::max(u, cfg.guard_eps), 1.0 - cfg.guard_eps);
    const double e = stream.exponential();
    return stable_kernel_log(beta, u) - std::log(e);
}

}  // namespace detail

// One-sided beta-stable S with E exp(-lambda S) = exp(-lambda^beta):
// S = (A(U) / E)^((1-beta)/beta), U uniform, E standard exponential.
inline double sample_stable(double beta, RngStream& stream, const StableSamplerConfig& cfg = {}) {
    detail::check_stable_beta(beta);
    cfg.validate();
    return std::exp((1.0 - beta) / beta * detail::kanter_log_ratio(beta, stream, cfg));
}

// Y_beta = S^-beta, the variable with density M_beta. Computed directly as
// (E / A(U))^(1-beta) so that no overflow occurs for small beta.
inline double sample_y_beta(double beta, RngStream& stream, const StableSamplerConfig& cfg = {}) {
    detail::check_stable_beta(beta);
    cfg.validate();
    return std::exp(-(1.0 - beta) * detail::kanter_log_ratio(beta, stream, cfg));
}

// E[Y_beta^n] = n! / Gamma(beta n + 1). beta = 1 gives 1 (Y = 1).
inline double y_beta_moment(double beta, int n) {
    if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("beta", "must lie in (0,1]");
    if (n < 0) throw ParameterError("n", "must be >= 0");
    if (n == 0) return 1.0;
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(beta * n + 1.0));
}

}  // namespace greylift
