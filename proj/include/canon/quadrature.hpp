// quadrature.hpp — adaptive Simpson quadrature and Poisson averages on the line.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace canon {

inline constexpr double kPi = 3.14159265358979323846;

// Thrown when a tail/divergence detector concludes an improper integral is -inf.
struct divergent_integral : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = (left + right) - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol)
        return left + right + diff / 15.0;
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson with Richardson correction. `presplit` forces an initial
// uniform subdivision so oscillatory integrands cannot alias the error test.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10,
                        int max_depth = 30, int presplit = 1) {
    if (a == b) return 0.0;
    if (presplit < 1) presplit = 1;
    double total = 0.0;
    const double h = (b - a) / presplit;
    const double tol_k = tol / presplit;
    for (int k = 0; k < presplit; ++k) {
        const double x0 = a + k * h;
        const double x1 = (k + 1 == presplit) ? b : x0 + h;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0), fm = f(xm), f1 = f(x1);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += detail::simpson_recurse(f, x0, x1, f0, fm, f1, whole, tol_k, max_depth);
    }
    return total;
}

// Mean of f over [a, a+w] by composite Simpson with `per_unit` panels per unit.
template <class F>
double window_mean(F&& f, double a, double w, double per_unit = 8.0) {
    const int n = std::max(16, static_cast<int>(std::ceil(w * per_unit)));
    const double h = w / n;
    double sum = f(a) + f(a + w);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return (h / 3.0) * sum / w;
}

// True when windowed means of f grow geometrically across consecutive dyadic
// probes, the signature of a linear-or-faster escape to -inf, which is not
// integrable against the Poisson weight. Two probe scales: a moderate one
// where f is still representable even for log-densities that underflow, and a
// far one for slow linear decay.
template <class F>
bool tail_means_diverge(F&& f) {
    for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? 1.0 : -1.0;
        auto g = [&](double x) { return f(sgn * x); };
        for (const auto& [base, w, probes] :
             {std::tuple{64.0, 64.0, 4}, std::tuple{4096.0, 1024.0, 3}}) {
            double prev = window_mean(g, base, w);
            int growths = 0;
            double last = prev;
            for (int k = 1; k < probes; ++k) {
                const double m = window_mean(g, base * std::pow(2.0, k), w);
                if (std::abs(m) >= 1.5 * std::abs(prev)) ++growths;
                prev = m;
                last = m;
            }
            if (growths == probes - 1 && std::abs(last) > 10.0) return true;
        }
    }
    return false;
}

// (1/pi) * Integral over R of f(x)/(1+x^2) dx for locally integrable f whose
// tails are asymptotically almost periodic (constant mean + bounded oscillation).
// Core on |x| <= 4096 by blockwise adaptive Simpson; tails by windowed means.
// Diverging tail means raise divergent_integral; non-stationary tails are
// rejected since the constant-mean extrapolation would silently be wrong.
template <class F>
double poisson_average(F&& f, double tol = 1e-9) {
    const double T = 4096.0;
    const double W = 1024.0;

    auto weighted = [&](double x) { return f(x) / (1.0 + x * x); };

    // Dyadic core blocks: [0,1],[1,2],[2,4],...,[T/2,T] on both sides.
    std::vector<double> edges{0.0, 1.0};
    while (edges.back() < T) edges.push_back(std::min(2.0 * edges.back(), T));
    double core = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        const double mass = std::atan(b) - std::atan(a); // Poisson weight of block
        const double tol_b = std::max(0.25 * tol * mass, 1e-13);
        const int presplit = std::max(8, static_cast<int>(std::ceil(4.0 * (b - a))));
        core += adaptive_simpson(weighted, a, b, tol_b, 26, presplit);
        core += adaptive_simpson(weighted, -b, -a, tol_b, 26, presplit);
    }

    // Tail beyond T: three windowed means per side detect stationarity.
    double tails = 0.0;
    for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? 1.0 : -1.0;
        auto g = [&](double x) { return f(sgn * x); };
        const double m0 = window_mean(g, T, W);
        const double m1 = window_mean(g, 2.0 * T, W);
        const double m2 = window_mean(g, 4.0 * T, W);
        const double scale = 1.0 + std::max({std::abs(m0), std::abs(m1), std::abs(m2)});
        const double spread = std::max({std::abs(m0 - m1), std::abs(m1 - m2), std::abs(m0 - m2)});
        if (spread > 0.05 * scale) {
            const bool growing = std::abs(m1) >= 1.5 * std::abs(m0) &&
                                 std::abs(m2) >= 1.5 * std::abs(m1) && std::abs(m2) > 10.0;
            if (growing)
                throw divergent_integral("poisson_average: tail mean diverges");
            throw std::invalid_argument(
                "poisson_average: tail is not asymptotically stationary");
        }
        const double mean = (m0 + m1 + m2) / 3.0;
        tails += mean * (0.5 * kPi - std::atan(T));
    }
    return (core + tails) / kPi;
}

} // namespace canon
