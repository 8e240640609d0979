// entropy.hpp — entropy functionals I, J, K of a diagonal canonical system,
// computed backward from the constant tail (quadrature-free) with an
// independent Poisson-average quadrature route, plus the identity suite.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "canon/hamiltonian.hpp"
#include "canon/quadrature.hpp"
#include "canon/transfer.hpp"
#include "canon/weyl.hpp"

namespace canon {

enum class EntropyRoute { exact_tail, quadrature };

struct EntropyRecord {
    double I = 0.0;
    double J = 0.0; // may be -inf
    double K = 0.0; // may be +inf
    EntropyRoute route = EntropyRoute::exact_tail;
};

inline constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

// K(mu) = log I - J; J = -inf propagates to K = +inf.
inline double normalized_entropy(double i_value, double j_value) {
    if (j_value == kMinusInf) return std::numeric_limits<double>::infinity();
    return std::log(i_value) - j_value;
}

// I_H(r) = Im m_r(i), the Poisson average of the shifted spectral measure.
inline double entropy_I(const Hamiltonian& h, double r) {
    const Hamiltonian s = shift(h, r);
    if (!validate(s).nontrivial)
        throw hypothesis_error("entropy_I: shifted Hamiltonian is trivial");
    return std::imag(m_function(s, Complex(0.0, 1.0)).value);
}

// J_H(r) for diagonal H with constant tail, evaluated backward from the tail:
//   J(r) = J(tail) + 2 xi(tail) - 2 log|F(i)|   (no improper integral).
// A rank-one tail forces a purely discrete measure, hence J = -inf.
inline double entropy_J_exact(const Hamiltonian& h, double r = 0.0) {
    if (!h.diagonal())
        throw std::invalid_argument("entropy_J_exact: requires a diagonal Hamiltonian");
    const Hamiltonian s = shift(h, r);
    if (!validate(s).nontrivial)
        throw hypothesis_error("entropy_J_exact: shifted Hamiltonian is trivial");
    const SymMatrix2& tail = s.tail();
    if (!(tail.trace() > 0.0))
        throw hypothesis_error("entropy_J_exact: Hamiltonian is not singular");
    if (!(tail.det() > 0.0)) return kMinusInf;
    const double a1 = tail.h11, a2 = tail.h22;
    const double j_tail = std::log(std::sqrt(a2 / a1));
    const double t_tail = s.end_time();
    const TransferMatrix m = transfer_matrix(s, t_tail, Complex(0.0, 1.0));
    const Complex f = m.theta_p + Complex(0.0, std::sqrt(a2 / a1)) * m.theta_m;
    return j_tail + 2.0 * xi(s, t_tail) - 2.0 * std::log(std::abs(f));
}

// (1/pi) * int log w(x) / (1+x^2) dx for an even, evaluable density. The
// integrand is clipped at log w >= -700; diverging tails yield the -inf
// sentinel. Accuracy is approximately max(tol, 1e-7) for densities with
// asymptotically almost-periodic logarithm.
inline double entropy_J_quadrature(const std::function<double(double)>& w,
                                   double tol = 1e-9) {
    for (double x : {0.37, 1.71, 9.3}) {
        const double p = w(x), q = w(-x);
        if (std::abs(p - q) > 1e-9 * (1.0 + std::abs(p)))
            throw std::invalid_argument("entropy_J_quadrature: density is not even");
    }
    auto log_clip = [&](double clip) {
        return [&w, clip](double x) {
            const double v = w(x);
            if (!(v > 0.0)) return clip;
            return std::max(std::log(v), clip);
        };
    };
    // Divergence is probed on a deep clip; the -700 integration clip would pin
    // the tail means of a linearly diverging log w and hide it.
    if (tail_means_diverge(log_clip(-1e6))) return kMinusInf;
    try {
        return poisson_average(log_clip(-700.0), tol);
    } catch (const divergent_integral&) {
        return kMinusInf;
    }
}

// Exact-tail entropy record at shift r.
inline EntropyRecord entropy_K(const Hamiltonian& h, double r = 0.0) {
    EntropyRecord rec;
    rec.route = EntropyRoute::exact_tail;
    rec.I = entropy_I(h, r);
    rec.J = entropy_J_exact(h, r);
    rec.K = normalized_entropy(rec.I, rec.J);
    return rec;
}

// Quadrature-route record: I as the Poisson average of the exact density,
// J via entropy_J_quadrature. Serves as the independent oracle.
inline EntropyRecord entropy_K_quadrature(const Hamiltonian& h, double r = 0.0,
                                          double tol = 1e-9) {
    const Hamiltonian s = shift(h, r);
    if (!(s.tail().det() > 0.0))
        throw std::invalid_argument(
            "entropy_K_quadrature: needs a positive-determinant tail for the exact "
            "density");
    auto w = [&](double x) { return spectral_density(s, x); };
    EntropyRecord rec;
    rec.route = EntropyRoute::quadrature;
    rec.I = poisson_average(w, tol);
    rec.J = entropy_J_quadrature(w, tol);
    rec.K = normalized_entropy(rec.I, rec.J);
    return rec;
}

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

struct IdentityReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline CheckResult residual_check(std::string name, double residual, double threshold,
                                  std::string note = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.residual = residual;
    c.threshold = threshold;
    c.pass = residual <= threshold;
    c.note = std::move(note);
    return c;
}

// int_r^inf h_e(s) exp(-J_other(s)/2 - xi(s)) ds, split into adaptive quadrature
// on [r, t_tail] and the closed-form tail contribution (a_e/a_o)^{1/4} e^{-xi}.
inline double entropy_integral_rhs(const Hamiltonian& h, double r, bool first_entry) {
    const Hamiltonian hd = dual(h);
    const double t_tail = h.end_time();
    auto integrand = [&](double s) {
        const double he = first_entry ? h.h1_at(s) : h.h2_at(s);
        const double j_other =
            first_entry ? entropy_J_exact(hd, s) : entropy_J_exact(h, s);
        return he * std::exp(-0.5 * j_other - xi(h, s));
    };
    double acc = 0.0;
    const Hamiltonian grid = h.with_breakpoint(std::min(r, t_tail));
    for (std::size_t k = 0; k < grid.piece_count(); ++k) {
        const double a = std::max(r, grid.breakpoint(k));
        const double b = grid.breakpoint(k + 1);
        if (b > a) acc += adaptive_simpson(integrand, a, b, 1e-10, 28, 8);
    }
    const double a1 = h.tail().h11, a2 = h.tail().h22;
    const double lo = std::max(r, t_tail);
    const double ratio = first_entry ? a1 / a2 : a2 / a1;
    acc += std::pow(ratio, 0.25) * std::exp(-xi(h, lo));
    return acc;
}

} // namespace detail

// Residual suite for the entropy identities of a diagonal Hamiltonian with a
// positive-determinant constant tail:
//  - finite-difference checks of J' = 2 I h1 - 2 xi' and
//    K' = -I h1 - h2 / I + 2 xi' at interior points (second-order convergence),
//  - the two integral equations coupling J and its dual,
//  - K = K_dual and I * I_dual = 1,
//  - Bernstein–Szego additivity K(0) = K_hat(0) + K(r) at every breakpoint,
//  - route agreement between the backward J and the quadrature J.
inline IdentityReport identity_suite(const Hamiltonian& h) {
    if (!h.diagonal())
        throw std::invalid_argument("identity_suite: requires a diagonal Hamiltonian");
    if (!(h.tail().det() > 0.0))
        throw std::invalid_argument(
            "identity_suite: requires a positive-determinant constant tail");
    IdentityReport rep;
    const Hamiltonian hd = dual(h);

    auto j_at = [&](double r) { return entropy_J_exact(h, r); };
    auto k_at = [&](double r) {
        return normalized_entropy(entropy_I(h, r), entropy_J_exact(h, r));
    };

    // Finite-difference derivative checks at the midpoint of every piece.
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        const double a = h.breakpoint(k), b = h.breakpoint(k + 1);
        const double r = 0.5 * (a + b);
        const double step = 1e-4 * (b - a);
        const double i_r = entropy_I(h, r);
        const double h1 = h.piece(k).h11, h2 = h.piece(k).h22;
        const double xi_rate = std::sqrt(h.piece(k).det());

        auto fd = [&](auto&& f, double target, double d) {
            return std::abs((f(r + d) - f(r - d)) / (2.0 * d) - target);
        };
        const double j_target = 2.0 * i_r * h1 - 2.0 * xi_rate;
        const double rj1 = fd(j_at, j_target, step);
        const double rj2 = fd(j_at, j_target, 0.5 * step);
        const bool j_ok = rj2 < 1e-9 || rj2 <= rj1 / 2.5;
        rep.checks.push_back(
            {"dJ/dr piece " + std::to_string(k), rj2,
             std::max(rj1 / 2.5, 1e-9), j_ok,
             "coarse=" + std::to_string(rj1)});

        const double k_target = -i_r * h1 - h2 / i_r + 2.0 * xi_rate;
        const double rk1 = fd(k_at, k_target, step);
        const double rk2 = fd(k_at, k_target, 0.5 * step);
        const bool k_ok = rk2 < 1e-9 || rk2 <= rk1 / 2.5;
        rep.checks.push_back(
            {"dK/dr piece " + std::to_string(k), rk2,
             std::max(rk1 / 2.5, 1e-9), k_ok,
             "coarse=" + std::to_string(rk1)});
    }

    // Integral equations at r = 0 and the midpoint of the first piece.
    std::vector<double> probes{0.0};
    if (h.piece_count() > 0) probes.push_back(0.5 * h.breakpoint(1));
    for (double r : probes) {
        const double lhs1 = std::exp(-0.5 * entropy_J_exact(h, r) - xi(h, r));
        const double rhs1 = detail::entropy_integral_rhs(h, r, true);
        rep.checks.push_back(detail::residual_check(
            "J integral equation (h1 route) at r=" + std::to_string(r),
            std::abs(lhs1 - rhs1), 1e-6));
        const double lhs2 = std::exp(-0.5 * entropy_J_exact(hd, r) - xi(h, r));
        const double rhs2 = detail::entropy_integral_rhs(h, r, false);
        rep.checks.push_back(detail::residual_check(
            "J integral equation (h2 route) at r=" + std::to_string(r),
            std::abs(lhs2 - rhs2), 1e-6));
    }

    // J decomposition at r: J(r) = J(0) - 2 xi(r) + 2 log|theta_p + i I(r) theta_m|.
    // The two sides split the axis at r and at the tail foot respectively.
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        const double r = 0.5 * (h.breakpoint(k) + h.breakpoint(k + 1));
        const TransferMatrix m = transfer_matrix(h, r, Complex(0.0, 1.0));
        const Complex f = m.theta_p + Complex(0.0, entropy_I(h, r)) * m.theta_m;
        const double rhs =
            entropy_J_exact(h, 0.0) - 2.0 * xi(h, r) + 2.0 * std::log(std::abs(f));
        rep.checks.push_back(detail::residual_check(
            "J decomposition at r=" + std::to_string(r),
            std::abs(entropy_J_exact(h, r) - rhs), 1e-10));
    }

    // Duality and additivity along the breakpoint grid.
    for (double r : h.breakpoints()) {
        const double i_h = entropy_I(h, r);
        const double i_d = entropy_I(hd, r);
        rep.checks.push_back(detail::residual_check(
            "I * I_dual at r=" + std::to_string(r), std::abs(i_h * i_d - 1.0), 1e-10));
        rep.checks.push_back(detail::residual_check(
            "K = K_dual at r=" + std::to_string(r),
            std::abs(k_at(r) - normalized_entropy(i_d, entropy_J_exact(hd, r))), 1e-10));
    }
    const double k0 = k_at(0.0);
    for (double r : h.breakpoints()) {
        if (r == 0.0) continue;
        const Hamiltonian hat = bernstein_szego(h, r, entropy_I(h, r));
        const double k_hat = normalized_entropy(entropy_I(hat, 0.0),
                                                entropy_J_exact(hat, 0.0));
        rep.checks.push_back(detail::residual_check(
            "entropy additivity at r=" + std::to_string(r),
            std::abs(k0 - (k_hat + k_at(r))), 1e-8));
    }

    // Route agreement of the two J computations at r = 0.
    auto w = [&](double x) { return spectral_density(h, x); };
    rep.checks.push_back(detail::residual_check(
        "J route agreement", std::abs(entropy_J_exact(h, 0.0) - entropy_J_quadrature(w)),
        1e-6));
    return rep;
}

} // namespace canon
