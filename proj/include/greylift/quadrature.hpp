#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "greylift/error.hpp"

namespace greylift::quad {

struct Options {
    double abs_tol = 1e-9;
    double rel_tol = 1e-12;
    std::size_t max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
    double l1 = 0.0;     // integral of |f|
    std::size_t intervals = 0;
};

namespace detail {

struct Panel {
    double a, b, value, error, l1;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// 21-point Kronrod extension of the 10-point Gauss rule on [a, b].
template <class F>
Panel gk21(F& f, double a, double b) {
    using K = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    static const auto& xk = K::abscissa();
    static const auto& wk = K::weights();
    static const auto& wg = G::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    // Kronrod abscissae are listed from 0 outward; odd positions are the
    // Gauss nodes (10-point rule has no center node).
    double kr = 0.0;
    double ga = 0.0;
    double l1 = 0.0;
    const double f0 = f(c);
    kr += wk[0] * f0;
    l1 += wk[0] * std::abs(f0);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double dx = h * xk[i];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        kr += wk[i] * (f1 + f2);
        l1 += wk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) ga += wg[i / 2] * (f1 + f2);
    }
    Panel p{a, b, kr * h, std::abs((kr - ga) * h), l1 * std::abs(h)};
    // Panels at roundoff level cannot be refined further.
    p.error = std::max(p.error, 50.0 * std::numeric_limits<double>::epsilon() * p.l1);
    return p;
}

template <class F>
Result adaptive(F& f, double a, double b, const Options& opt) {
    std::priority_queue<Panel> heap;
    Panel first = gk21(f, a, b);
    double value = first.value;
    double error = first.error;
    double l1 = first.l1;
    heap.push(first);
    std::size_t n = 1;
    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(value)); };
    while (error > target() && n < opt.max_intervals) {
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        heap.pop();
        const Panel left = gk21(f, worst.a, mid);
        const Panel right = gk21(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
        ++n;
    }
    // Re-sum from the panels to shed accumulated update roundoff.
    value = error = l1 = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        l1 += heap.top().l1;
        heap.pop();
    }
    return {value, error, l1, n};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (G10/K21) on [a, b]; b may be +infinity.
// Throws AccuracyError when the estimate misses max(abs_tol, rel_tol |I|).
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    if (a == b) return {};
    Result r;
    if (std::isinf(b)) {
        // x = a + t / (1 - t)
        auto g = [&](double t) {
            const double one_minus = 1.0 - t;
            const double x = a + t / one_minus;
            const double v = f(x);
            return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
        };
        r = detail::adaptive(g, 0.0, 1.0, opt);
    } else {
        r = detail::adaptive(f, a, b, opt);
    }
    if (!std::isfinite(r.value)) {
        throw AccuracyError("quadrature produced a non-finite value",
                            std::numeric_limits<double>::infinity());
    }
    if (r.error > std::max(opt.abs_tol, opt.rel_tol * std::abs(r.value))) {
        throw AccuracyError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            r.error);
    }
    return r;
}

// Sums integrate() over consecutive breakpoints. Breakpoints are sorted and
// deduplicated; the last one may be +infinity. Tolerances apply to the total.
template <class F>
Result integrate_pieces(F&& f, std::vector<double> points, const Options& opt = {}) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    Result total;
    if (points.size() < 2) return total;
    Options piece_opt = opt;
    piece_opt.abs_tol = opt.abs_tol / static_cast<double>(points.size() - 1);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const Result piece = integrate(f, points[i], points[i + 1], piece_opt);
        total.value += piece.value;
        total.error += piece.error;
        total.l1 += piece.l1;
        total.intervals += piece.intervals;
    }
    return total;
}

}  // namespace greylift::quad
