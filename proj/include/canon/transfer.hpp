// transfer.hpp — exact solution of J M' = z H M on piecewise-constant
// Hamiltonians via closed-form per-piece propagators, plus the energy identity.
#pragma once

#include <complex>

#include "canon/hamiltonian.hpp"
#include "canon/quadrature.hpp"

namespace canon {

using Complex = std::complex<double>;

// Fundamental solution M(t,z) = [[theta_p, phi_p], [theta_m, phi_m]] with
// M(0,z) = Id and det M = 1.
struct TransferMatrix {
    Complex theta_p{1.0, 0.0};
    Complex phi_p{0.0, 0.0};
    Complex theta_m{0.0, 0.0};
    Complex phi_m{1.0, 0.0};

    Complex det() const { return theta_p * phi_m - theta_m * phi_p; }

    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
        return {a.theta_p * b.theta_p + a.phi_p * b.theta_m,
                a.theta_p * b.phi_p + a.phi_p * b.phi_m,
                a.theta_m * b.theta_p + a.phi_m * b.theta_m,
                a.theta_m * b.phi_p + a.phi_m * b.phi_m};
    }
};

namespace detail {

// sin(w)/w, series below |w| = 1e-4 (relative error under 1e-16 there).
inline Complex sinc(Complex w) {
    if (std::abs(w) < 1e-4) {
        const Complex w2 = w * w;
        return 1.0 - w2 / 6.0 + w2 * w2 / 120.0 - w2 * w2 * w2 / 5040.0;
    }
    return std::sin(w) / w;
}

} // namespace detail

// Propagator exp(-z*delta*J*H) of one constant piece. Since (JH)^2 = -det(H)*Id,
//   exp(-z d J H) = cos(w) Id - sinc(w) * (z d J H),  w = z d sqrt(det H),
// degenerating to Id - z d J H when det H = 0 (exact determinant test).
inline TransferMatrix step_matrix(const SymMatrix2& p, double delta, Complex z) {
    if (delta < 0.0) throw std::domain_error("step_matrix: negative step");
    const Complex zd = z * delta;
    const double d = p.det();
    Complex c, s; // M = c*Id - s*(J H), with s = zd * sinc(w)
    if (d == 0.0) {
        c = 1.0;
        s = zd;
    } else {
        const Complex w = zd * std::sqrt(d);
        c = std::cos(w);
        s = zd * detail::sinc(w);
    }
    // J H = [[-h12, -h22], [h11, h12]]
    return {c + s * p.h12, s * p.h22, -s * p.h11, c - s * p.h12};
}

// M(t,z): ordered left product of the step matrices of the pieces meeting [0,t].
inline TransferMatrix transfer_matrix(const Hamiltonian& h, double t, Complex z) {
    if (t < 0.0) throw std::domain_error("transfer_matrix: negative time");
    TransferMatrix m;
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        const double a = h.breakpoint(k), b = h.breakpoint(k + 1);
        if (t <= a) return m;
        m = step_matrix(h.piece(k), std::min(t, b) - a, z) * m;
    }
    if (t > h.end_time()) m = step_matrix(h.tail(), t - h.end_time(), z) * m;
    return m;
}

// <H v, v> for the first column v = (theta_p, theta_m); real by symmetry of H.
inline double energy_form(const SymMatrix2& p, const TransferMatrix& m) {
    return p.h11 * std::norm(m.theta_p) +
           2.0 * p.h12 * std::real(m.theta_p * std::conj(m.theta_m)) +
           p.h22 * std::norm(m.theta_m);
}

// Residual of the energy identity
//   Im(theta_p(t,z) conj(theta_m(t,z))) = Im z * int_0^t <H Theta, Theta> ds.
// The right-hand side is evaluated by adaptive quadrature per piece (for
// rank-deficient pieces the integrand is a polynomial and the rule is exact).
inline double energy_residual(const Hamiltonian& h, double t, Complex z) {
    const TransferMatrix mt = transfer_matrix(h, t, z);
    const double lhs = std::imag(mt.theta_p * std::conj(mt.theta_m));

    double integral = 0.0;
    TransferMatrix at_start; // M at the left end of the current piece
    for (std::size_t k = 0; k <= h.piece_count(); ++k) {
        const bool is_tail = k == h.piece_count();
        const SymMatrix2& p = is_tail ? h.tail() : h.piece(k);
        const double a = h.breakpoint(k);
        if (t <= a) break;
        const double b = is_tail ? t : std::min(t, h.breakpoint(k + 1));
        auto f = [&](double s) {
            return energy_form(p, step_matrix(p, s - a, z) * at_start);
        };
        const int presplit = std::max(8, static_cast<int>(std::ceil(4.0 * (b - a))));
        integral += adaptive_simpson(f, a, b, 1e-13 * (1.0 + std::abs(lhs)), 26, presplit);
        if (!is_tail && b == h.breakpoint(k + 1))
            at_start = step_matrix(p, b - a, z) * at_start;
        if (b == t) break;
    }
    return std::abs(lhs - std::imag(z) * integral);
}

} // namespace canon
