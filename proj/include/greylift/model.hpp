#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greylift/error.hpp"

namespace greylift {

// (beta, alpha) of a generalized grey Brownian motion. The Hurst index is
// always derived, never stored.
class GreyParams {
public:
    double beta() const noexcept { return beta_; }
    double alpha() const noexcept { return alpha_; }
    double hurst() const noexcept { return 0.5 * alpha_; }

    bool rough() const noexcept { return alpha_ < 1.0; }
    bool smooth() const noexcept { return alpha_ > 1.0; }

    // Skips range checks. Test hooks use it for the Gaussian limit beta = 1.
    static GreyParams unchecked(double beta, double alpha) noexcept {
        return GreyParams(beta, alpha);
    }

private:
    GreyParams(double beta, double alpha) noexcept : beta_(beta), alpha_(alpha) {}

    friend GreyParams validate_params(double beta, double alpha);

    double beta_;
    double alpha_;
};

inline GreyParams validate_params(double beta, double alpha) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw ParameterError("beta", "must lie in the open interval (0,1), got " +
                                         std::to_string(beta));
    }
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw ParameterError("alpha", "must lie in the open interval (0,2), got " +
                                          std::to_string(alpha));
    }
    return GreyParams(beta, alpha);
}

inline double validate_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw ParameterError("hurst", "must lie in the open interval (0,1), got " +
                                          std::to_string(hurst));
    }
    return hurst;
}

// Strictly increasing, nonnegative sampling times.
class TimeGrid {
public:
    TimeGrid() = default;

    explicit TimeGrid(std::vector<double> times) : times_(std::move(times)) {
        if (times_.empty()) throw ParameterError("grid", "must contain at least one time");
        for (std::size_t i = 0; i < times_.size(); ++i) {
            if (!std::isfinite(times_[i]) || times_[i] < 0.0) {
                throw ParameterError("grid", "times must be finite and nonnegative");
            }
            if (i > 0 && !(times_[i] > times_[i - 1])) {
                throw ParameterError("grid", "times must be strictly increasing");
            }
        }
        detect_uniform();
    }

    // {0, dt, 2 dt, ..., t_max} with n_steps intervals.
    static TimeGrid uniform(double t_max, std::size_t n_steps) {
        if (!(t_max > 0.0)) throw ParameterError("t_max", "must be positive");
        if (n_steps < 1) throw ParameterError("n_steps", "must be at least 1");
        std::vector<double> t(n_steps + 1);
        for (std::size_t i = 0; i <= n_steps; ++i) {
            t[i] = t_max * static_cast<double>(i) / static_cast<double>(n_steps);
        }
        return TimeGrid(std::move(t));
    }

    std::span<const double> times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    double operator[](std::size_t i) const { return times_[i]; }
    double front() const { return times_.front(); }
    double back() const { return times_.back(); }

    bool is_uniform() const noexcept { return uniform_; }
    double step() const noexcept { return step_; }
    bool starts_at_zero() const noexcept { return !times_.empty() && times_.front() == 0.0; }

    // Index of t in the grid (exact match up to 1e-12 relative), if any.
    std::optional<std::size_t> index_of(double t) const {
        auto it = std::lower_bound(times_.begin(), times_.end(), t - 1e-12 * std::max(1.0, std::abs(t)));
        if (it != times_.end() && std::abs(*it - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
            return static_cast<std::size_t>(it - times_.begin());
        }
        return std::nullopt;
    }

    // For a uniform grid whose first time is k * step for an integer k >= 0,
    // returns k. Generators stepping from t = 0 need this.
    std::size_t uniform_offset() const {
        if (!uniform_) throw ParameterError("grid", "uniform grid required");
        const double k = times_.front() / step_;
        const double kr = std::round(k);
        if (std::abs(k - kr) > 1e-9 * std::max(1.0, kr)) {
            throw ParameterError("grid", "first time must be a multiple of the step");
        }
        return static_cast<std::size_t>(kr);
    }

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.times_ == b.times_; }

private:
    void detect_uniform() {
        uniform_ = false;
        step_ = 0.0;
        if (times_.size() < 2) return;
        step_ = (times_.back() - times_.front()) / static_cast<double>(times_.size() - 1);
        double dev = 0.0;
        for (std::size_t i = 1; i < times_.size(); ++i) {
            dev = std::max(dev, std::abs((times_[i] - times_[i - 1]) - step_));
        }
        uniform_ = dev < 1e-12 * step_;
    }

    std::vector<double> times_;
    bool uniform_ = false;
    double step_ = 0.0;
};

enum class Method { cholesky, circulant, mvn, lift_rough, lift_smooth };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::cholesky: return "cholesky";
        case Method::circulant: return "circulant";
        case Method::mvn: return "mvn";
        case Method::lift_rough: return "lift_rough";
        case Method::lift_smooth: return "lift_smooth";
    }
    return "unknown";
}

inline Method method_from_string(std::string_view s) {
    for (Method m : {Method::cholesky, Method::circulant, Method::mvn, Method::lift_rough,
                     Method::lift_smooth}) {
        if (to_string(m) == s) return m;
    }
    throw ParameterError("method", "unknown method '" + std::string(s) + "'");
}

// Simulated paths, stored replica-major: value(p, i, c) for path p, time
// index i and coordinate c.
struct PathEnsemble {
    std::vector<double> values;
    TimeGrid grid;
    std::size_t n_paths = 0;
    std::size_t d = 1;
    Method method = Method::cholesky;
    std::uint64_t seed = 0;
    double alpha = 1.0;                      // 2H of the underlying fBm
    std::optional<double> beta;              // set iff the paths are grey
    std::optional<std::vector<double>> y_values;

    PathEnsemble() = default;
    PathEnsemble(TimeGrid g, std::size_t paths, std::size_t dim, Method m, std::uint64_t s,
                 double alpha_)
        : values(paths * g.size() * dim, 0.0),
          grid(std::move(g)),
          n_paths(paths),
          d(dim),
          method(m),
          seed(s),
          alpha(alpha_) {}

    std::size_t n_times() const noexcept { return grid.size(); }

    double& at(std::size_t p, std::size_t i, std::size_t c) {
        return values[(p * grid.size() + i) * d + c];
    }
    double at(std::size_t p, std::size_t i, std::size_t c) const {
        return values[(p * grid.size() + i) * d + c];
    }
};

}  // namespace greylift
