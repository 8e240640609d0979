// weyl.hpp — Weyl–Titchmarsh function with certified accuracy, spectral
// density on the real axis, and the linear Herglotz coefficients.
#pragma once

#include <complex>
#include <string>

#include "canon/hamiltonian.hpp"
#include "canon/transfer.hpp"

namespace canon {

enum class WeylRoute { exact_tail, disk_limit };

struct WeylResult {
    Complex value{0.0, 0.0};
    double radius = 0.0; // certified distance bound to the true m(z)
    WeylRoute route = WeylRoute::exact_tail;
};

struct WeylDisk {
    Complex point{0.0, 0.0};
    double radius = 0.0;
};

// Requested accuracy not reachable within the horizon cap; carries the best disk.
struct horizon_error : std::runtime_error {
    WeylDisk best;
    horizon_error(const std::string& msg, WeylDisk disk)
        : std::runtime_error(msg), best(disk) {}
};

// Nesting-disk certificate at horizon t: the true m(z) satisfies
// |m(z) - phi_m/theta_m| <= 1 / Im(theta_p conj(theta_m)).
inline WeylDisk weyl_disk(const Hamiltonian& h, double t, Complex z) {
    if (!(std::imag(z) > 0.0)) throw std::domain_error("weyl_disk: need Im z > 0");
    const TransferMatrix m = transfer_matrix(h, t, z);
    const double denom = std::imag(m.theta_p * std::conj(m.theta_m));
    if (m.theta_m == Complex{0.0, 0.0} || !(denom > 0.0))
        throw horizon_error("weyl_disk: horizon too short (degenerate disk)", {});
    return {m.phi_m / m.theta_m, 1.0 / denom};
}

namespace detail {

// Weyl function of the constant Hamiltonian P with det P > 0:
// the Herglotz root of  h11 m^2 - 2 h12 m + h22 = 0.
inline Complex constant_tail_m(const SymMatrix2& p) {
    return Complex(p.h12, std::sqrt(p.det())) / p.h11;
}

// Moebius image (phi_p + m_tail phi_m) / (theta_p + m_tail theta_m).
inline Complex moebius(const TransferMatrix& m, Complex m_tail) {
    return (m.phi_p + m_tail * m.phi_m) / (m.theta_p + m_tail * m.theta_m);
}

} // namespace detail

// Disk-limit evaluation: doubles the horizon from t = 1 up to 2^20 until the
// certified radius drops below tol. Independent of the exact-tail route.
inline WeylResult m_function_disk_limit(const Hamiltonian& h, Complex z,
                                        double tol = 1e-10) {
    if (!(std::imag(z) > 0.0))
        throw std::domain_error("m_function_disk_limit: need Im z > 0");
    WeylDisk best{};
    bool have = false;
    for (double t = 1.0; t <= 1048576.0; t *= 2.0) {
        WeylDisk disk;
        try {
            disk = weyl_disk(h, t, z);
        } catch (const horizon_error&) {
            continue; // still inside a leading indivisible stretch
        }
        if (!have || disk.radius < best.radius) {
            best = disk;
            have = true;
        }
        if (disk.radius < tol) {
            // The limit cannot depend on the reference parameter: the omega=inf
            // image must sit in the same certified disk.
            const TransferMatrix m = transfer_matrix(h, t, z);
            if (m.theta_p != Complex{0.0, 0.0}) {
                const Complex other = m.phi_p / m.theta_p;
                if (std::abs(other - disk.point) > 2.0 * disk.radius + 1e-13)
                    throw std::logic_error(
                        "m_function_disk_limit: reference-parameter images disagree");
            }
            return {disk.point, disk.radius, WeylRoute::disk_limit};
        }
    }
    throw horizon_error("m_function_disk_limit: tolerance unreachable within horizon cap",
                        best);
}

// m(z), Im z > 0. Eventually-constant Hamiltonians are evaluated exactly:
// a positive-determinant tail contributes its constant Weyl function, a
// rank-one tail of angle phi contributes the degenerate limit
// (cos(phi) phi_p + sin(phi) phi_m) / (cos(phi) theta_p + sin(phi) theta_m).
inline WeylResult m_function(const Hamiltonian& h, Complex z, double tol = 1e-10) {
    if (!(std::imag(z) > 0.0)) throw std::domain_error("m_function: need Im z > 0");
    const ValidationReport rep = validate(h);
    if (!rep.singular)
        throw hypothesis_error("m_function: Hamiltonian is not singular "
                               "(trace of the tail vanishes)");
    if (!rep.nontrivial)
        throw hypothesis_error("m_function: Hamiltonian is trivial");
    const SymMatrix2& tail = h.tail();
    const TransferMatrix m = transfer_matrix(h, h.end_time(), z);
    if (tail.det() > 0.0)
        return {detail::moebius(m, detail::constant_tail_m(tail)), 0.0,
                WeylRoute::exact_tail};
    // Rank-one tail: direction (u, v) proportional to e_phi.
    const double u = std::sqrt(tail.h11);
    const double v = tail.h12 < 0.0 ? -std::sqrt(tail.h22) : std::sqrt(tail.h22);
    const Complex num = u * m.phi_p + v * m.phi_m;
    const Complex den = u * m.theta_p + v * m.theta_m;
    if (den == Complex{0.0, 0.0})
        return m_function_disk_limit(h, z, tol);
    return {num / den, 0.0, WeylRoute::exact_tail};
}

// Density of the spectral measure on the real axis. With a positive-determinant
// tail the value is exact: w(x) = w_inf / |F(x)|^2 where w_inf = Im of the tail
// Weyl function and F(x) = theta_p + m_inf theta_m at the tail foot. Otherwise
// eps > 0 requests the Poisson-regularized estimate Im m(x + i eps).
inline double spectral_density(const Hamiltonian& h, double x, double eps = 0.0) {
    const SymMatrix2& tail = h.tail();
    if (tail.det() > 0.0) {
        const Complex m_inf = detail::constant_tail_m(tail);
        const TransferMatrix m = transfer_matrix(h, h.end_time(), Complex(x, 0.0));
        const Complex f = m.theta_p + m_inf * m.theta_m;
        return std::imag(m_inf) / std::norm(f);
    }
    if (eps > 0.0) return std::imag(m_function(h, Complex(x, eps)).value);
    throw std::invalid_argument(
        "spectral_density: no positive-determinant tail; supply eps > 0 for a "
        "Poisson-regularized estimate");
}

// Linear coefficients of the Herglotz representation m(z) = ... + b z + a.
// For diagonal Hamiltonians a = 0, and b is the h2-mass of the leading
// indivisible interval of angle pi/2 (empty -> b = 0).
struct HerglotzCoefficients {
    double a = 0.0;
    double b = 0.0;
};

inline HerglotzCoefficients herglotz_coefficients(const Hamiltonian& h) {
    if (!h.diagonal())
        throw std::invalid_argument(
            "herglotz_coefficients: only diagonal Hamiltonians are supported");
    if (!validate(h).nontrivial)
        throw hypothesis_error("herglotz_coefficients: Hamiltonian is trivial");
    HerglotzCoefficients out;
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        if (h.piece(k).h11 != 0.0) return out;
        out.b += h.piece(k).h22 * (h.breakpoint(k + 1) - h.breakpoint(k));
    }
    // All bounded pieces have h1 = 0; a nontrivial H must have h1 > 0 in the tail.
    return out;
}

} // namespace canon
