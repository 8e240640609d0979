// verify.hpp — the built-in verification suite: every exact identity of the
// library checked on the shipped corpus, one named residual per check.
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "canon/corpus.hpp"
#include "canon/entropy.hpp"
#include "canon/hamiltonian.hpp"
#include "canon/muckenhoupt.hpp"
#include "canon/string.hpp"
#include "canon/transfer.hpp"
#include "canon/weyl.hpp"

namespace canon {

namespace detail {

inline void push_check(std::vector<CheckResult>& out, std::string name, double residual,
                       double threshold) {
    CheckResult c;
    c.name = std::move(name);
    c.residual = residual;
    c.threshold = threshold;
    c.pass = residual <= threshold;
    out.push_back(std::move(c));
}

inline Hamiltonian verify_random_det1(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> hv(0.4, 2.5);
    std::uniform_real_distribution<double> len(0.4, 1.0);
    const double b1 = len(rng), b2 = b1 + len(rng);
    const double v1 = hv(rng), v2 = hv(rng), vt = hv(rng);
    return Hamiltonian::diagonal({0.0, b1, b2}, {v1, v2, vt},
                                 {1.0 / v1, 1.0 / v2, 1.0 / vt});
}

} // namespace detail

// Runs every check; deterministic order and content.
inline std::vector<CheckResult> run_verify() {
    std::vector<CheckResult> out;
    const Complex i_unit(0.0, 1.0);
    const double c1 = std::cosh(1.0), s1 = std::sinh(1.0);

    // Constant Hamiltonian diag(2, 8).
    const Hamiltonian c28 = corpus::constant_28();
    detail::push_check(out, "constant: |m(i) - 2i|",
                       std::abs(m_function(c28, i_unit).value - Complex(0.0, 2.0)),
                       1e-12);
    double wres = 0.0;
    for (double x : {-4.0, 0.0, 0.3, 7.7})
        wres = std::max(wres, std::abs(spectral_density(c28, x) - 2.0));
    detail::push_check(out, "constant: density is 2", wres, 1e-12);
    detail::push_check(out, "constant: J = log 2",
                       std::abs(entropy_J_exact(c28) - std::log(2.0)), 1e-12);
    detail::push_check(out, "constant: K = 0", std::abs(entropy_K(c28).K), 1e-12);
    detail::push_check(out, "constant: discrete characteristic = 0",
                       std::abs(szego_characteristic(c28).total), 1e-15);

    // Transfer integrity on a deterministic pseudo-random family.
    {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double det_res = 0.0, coc_res = 0.0, en_res = 0.0;
        for (int k = 0; k < 20; ++k) {
            const Hamiltonian h = detail::verify_random_det1(rng);
            const double t = 0.5 + 3.0 * u(rng);
            const Complex z(2.0 * (2.0 * u(rng) - 1.0), 0.2 + 1.5 * u(rng));
            const TransferMatrix m = transfer_matrix(h, t, z);
            det_res = std::max(det_res, std::abs(m.det() - 1.0));
            const double r = 0.5 * t;
            const TransferMatrix a = transfer_matrix(h, r, z);
            const TransferMatrix b = transfer_matrix(shift(h, r), t - r, z);
            const TransferMatrix ba = b * a;
            coc_res = std::max({coc_res, std::abs(ba.theta_p - m.theta_p),
                                std::abs(ba.phi_p - m.phi_p),
                                std::abs(ba.theta_m - m.theta_m),
                                std::abs(ba.phi_m - m.phi_m)});
            en_res = std::max(en_res, energy_residual(h, t, z));
        }
        detail::push_check(out, "transfer: unimodularity", det_res, 1e-12);
        detail::push_check(out, "transfer: cocycle", coc_res, 1e-12);
        detail::push_check(out, "transfer: energy identity", en_res, 1e-10);
    }

    // Bump benchmark.
    const Hamiltonian bmp = corpus::bump();
    const double bump_i = (c1 + 0.5 * s1) / (c1 + 2.0 * s1);
    const double bump_j = 2.0 - 2.0 * std::log(c1 + 2.0 * s1);
    detail::push_check(out, "bump: I closed form",
                       std::abs(entropy_I(bmp, 0.0) - bump_i), 1e-12);
    detail::push_check(out, "bump: J closed form",
                       std::abs(entropy_J_exact(bmp) - bump_j), 1e-12);
    detail::push_check(
        out, "bump: J route agreement",
        std::abs(entropy_J_exact(bmp) -
                 entropy_J_quadrature([&](double x) { return spectral_density(bmp, x); })),
        1e-6);
    detail::push_check(out, "bump: K route agreement",
                       std::abs(entropy_K(bmp).K - entropy_K_quadrature(bmp).K), 1e-4);
    detail::push_check(out, "bump: discrete characteristic = 1/2",
                       std::abs(szego_characteristic(bmp).total - 0.5), 1e-15);

    // Weyl geometry.
    {
        double prev = std::numeric_limits<double>::infinity();
        double nesting = 0.0;
        for (double t : {1.0, 2.0, 4.0, 8.0}) {
            const auto disk = weyl_disk(bmp, t, i_unit);
            nesting = std::max(nesting, std::max(0.0, disk.radius - prev));
            prev = disk.radius;
        }
        detail::push_check(out, "weyl: disk radii nonincreasing", nesting, 0.0);
        const Complex m = m_function(bmp, i_unit).value;
        const Complex md = m_function(dual(bmp), i_unit).value;
        detail::push_check(out, "weyl: duality m m_dual = -1", std::abs(m * md + 1.0),
                           1e-10);
        const Hamiltonian lead =
            Hamiltonian::diagonal({0.0, 0.75}, {0.0, 1.0}, {1.0, 1.0});
        detail::push_check(out, "weyl: leading pi/2 interval gives b",
                           std::abs(herglotz_coefficients(lead).b - 0.75), 0.0);
    }

    // Entropy identity suites.
    {
        std::mt19937_64 rng(77);
        std::vector<std::pair<std::string, Hamiltonian>> members;
        members.emplace_back("bump", bmp);
        members.emplace_back("constant", c28);
        for (int k = 0; k < 3; ++k)
            members.emplace_back("random-" + std::to_string(k),
                                 detail::verify_random_det1(rng));
        for (const auto& [name, h] : members) {
            const IdentityReport rep = identity_suite(h);
            double worst = 0.0;
            bool pass = true;
            for (const auto& chk : rep.checks) {
                pass = pass && chk.pass;
                worst = std::max(worst, chk.residual / std::max(chk.threshold, 1e-300));
            }
            CheckResult c;
            c.name = "identities(" + name + "): worst residual/threshold";
            c.residual = worst;
            c.threshold = 1.0;
            c.pass = pass && worst <= 1.0;
            out.push_back(c);
        }
    }

    // Weight characteristics.
    {
        const WeightFunction step({0.0, 1.0}, {2.0}, 1.0);
        detail::push_check(out, "weights: unit-step bracket = 1/8",
                           std::abs(a2_ell1(step) - 0.125), 0.0);
        detail::push_check(
            out, "weights: kernel characteristic closed form",
            std::abs(int_characteristic(step) - 0.5 * (1.0 - std::exp(-1.0))), 1e-15);
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> len(0.3, 1.3), val(0.3, 3.0);
        double l1_res = 0.0;
        for (int k = 0; k < 3; ++k) {
            std::vector<double> breaks{0.0};
            std::vector<double> values;
            for (int j = 0; j < 3; ++j) {
                breaks.push_back(breaks.back() + len(rng));
                values.push_back(val(rng));
            }
            const WeightFunction h(breaks, values, val(rng));
            l1_res = std::max(l1_res, sequences_and_identity(h).identity_residual);
        }
        detail::push_check(out, "weights: renormalized L1 identity", l1_res, 1e-10);

        // Entropy bounds on the det-1 corpus members.
        const WeightFunction bump_w({0.0, 1.0}, {2.0}, 1.0);
        const double k_bump = entropy_K(bmp).K;
        detail::push_check(out, "bounds: K <= kernel characteristic (bump)",
                           std::max(0.0, k_bump - int_characteristic(bump_w)), 0.0);
        const auto wit = p1_witness(bump_w, k_bump);
        detail::push_check(out, "bounds: window-minimizer sum <= e^{10K}-1 (bump)",
                           std::max(0.0, wit.sum - wit.bound), 0.0);
        const auto rep28 = det_one_reparametrize(c28, 0.0);
        const WeightFunction w28 = weight_from_hamiltonian(rep28.hamiltonian);
        detail::push_check(out, "bounds: K <= kernel characteristic (constant)",
                           std::max(0.0, entropy_K(c28).K - int_characteristic(w28)),
                           1e-12);
    }

    // Co-vanishing family.
    {
        double prev_k = std::numeric_limits<double>::infinity();
        double prev_kt = std::numeric_limits<double>::infinity();
        bool monotone = true, ratio_ok = true;
        for (double beta : {1e-1, 1e-2, 1e-3}) {
            const Hamiltonian h = corpus::near_constant(beta);
            const double k = entropy_K(h).K;
            const double kt = szego_characteristic(h).total;
            monotone = monotone && k < prev_k && kt < prev_kt && k > 0.0 && kt > 0.0;
            const double ratio = k / kt;
            ratio_ok = ratio_ok && ratio >= 1e-2 && ratio <= 1e2;
            prev_k = k;
            prev_kt = kt;
        }
        CheckResult c;
        c.name = "co-vanishing: K and discrete characteristic shrink together";
        c.residual = monotone && ratio_ok ? 0.0 : 1.0;
        c.threshold = 0.0;
        c.pass = monotone && ratio_ok;
        out.push_back(c);
    }

    // Strings.
    {
        const StringSpec atom_str = corpus::unit_density_atom_string();
        const Hamiltonian image = string_to_hamiltonian(atom_str);
        detail::push_check(out, "string: bijection round trip",
                           hamiltonian_to_string(image) == atom_str ? 0.0 : 1.0, 0.0);
        const auto ks = string_characteristic(atom_str);
        detail::push_check(out, "string: atom characteristic = 2",
                           std::abs(ks.total - 2.0), 0.0);
        const auto kh = szego_characteristic(image);
        double term_res = std::abs(double(ks.terms.size()) - double(kh.terms.size()));
        for (std::size_t n = 0; n < std::min(ks.terms.size(), kh.terms.size()); ++n)
            term_res = std::max(term_res, std::abs(ks.terms[n] - kh.terms[n]));
        detail::push_check(out, "string: characteristic matches image term-by-term",
                           term_res, 1e-13);
        const auto eta = eta_grid(image, 4);
        const auto tn = string_t_points(atom_str, 4);
        double grid_res = 0.0;
        for (std::size_t n = 0; n < tn.size(); ++n)
            grid_res = std::max(grid_res,
                                std::abs(integrate_h1(image, 0.0, eta[n]) - tn[n]));
        detail::push_check(out, "string: clock inverse maps eta to t", grid_res, 0.0);

        double sdk = 0.0;
        const StringSpec mass_str = corpus::stieltjes_string();
        const Hamiltonian mass_image = string_to_hamiltonian(mass_str);
        for (Complex z : {Complex(0.0, 1.0), Complex(1.0, 1.0), Complex(0.0, 2.0)}) {
            const Complex lhs = z * q_function(mass_str, z * z);
            sdk = std::max(sdk, std::abs(lhs + 1.0 / m_function(mass_image, z).value));
        }
        detail::push_check(out, "string: square-root bridge to the Weyl function", sdk,
                           1e-10);

        const StringSpec geo = corpus::geometric_string(0.75, 1200);
        const auto terms = string_characteristic_partial(geo, 1190);
        double sum = 0.0, half_sum = 0.0;
        for (std::size_t n = 0; n < terms.size(); ++n) {
            sum += terms[n];
            if (n == terms.size() / 2) half_sum = sum;
        }
        const bool geo_ok = std::isfinite(sum) && (sum - half_sum) < 0.05 &&
                            geo.mass(geo.length()) > 0.45 * 1200.0;
        CheckResult c;
        c.name = "string: contracting example keeps the characteristic summable";
        c.residual = geo_ok ? sum - half_sum : 1.0;
        c.threshold = 0.05;
        c.pass = geo_ok;
        out.push_back(c);
    }

    return out;
}

} // namespace canon
