#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "canon/corpus.hpp"
#include "canon/string.hpp"
#include "canon/weyl.hpp"
#include "test_util.hpp"

using namespace canon;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const Complex kI(0.0, 1.0);

} // namespace

TEST_CASE("string pair validation") {
    const auto good = validate_string(corpus::free_string());
    CHECK(good.valid_pair);

    // Finite length with finite mass is not a valid pair.
    const StringSpec finite(2.0, {0.0}, {1.0}, {});
    CHECK_FALSE(validate_string(finite).valid_pair);

    // The zero string is not a valid pair.
    const StringSpec zero(kInf, {0.0}, {0.0}, {});
    CHECK_FALSE(validate_string(zero).valid_pair);
    CHECK_THROWS_AS(string_to_hamiltonian(zero), hypothesis_error);
}

TEST_CASE("unit density maps to the balanced Hamiltonian") {
    const Hamiltonian h = string_to_hamiltonian(corpus::free_string());
    CHECK(h.piece_count() == 0);
    CHECK(h.tail() == diag_matrix(0.5, 0.5));
}

TEST_CASE("single point mass maps to the three-interval rank-one chain") {
    const Hamiltonian h = string_to_hamiltonian(corpus::stieltjes_string());
    CHECK(h == corpus::stieltjes_image());
}

TEST_CASE("atom at the origin produces a leading diag(0,1) interval") {
    const StringSpec s(kInf, {0.0}, {0.0}, {{0.0, 0.75}});
    const Hamiltonian h = string_to_hamiltonian(s);
    REQUIRE(h.piece_count() >= 1);
    CHECK(h.piece(0) == diag_matrix(0.0, 1.0));
    CHECK(h.breakpoint(1) == 0.75);
    CHECK(herglotz_coefficients(h).b == 0.75);
}

TEST_CASE("bijection round trips exactly on dyadic corpus data") {
    for (const StringSpec& s : {corpus::free_string(), corpus::stieltjes_string(),
                                corpus::unit_density_atom_string()}) {
        const Hamiltonian h = string_to_hamiltonian(s);
        CHECK(hamiltonian_to_string(h) == s);
        CHECK(string_to_hamiltonian(hamiltonian_to_string(h)) == h);
    }
    // Dyadic densities with several pieces and interleaved atoms.
    const StringSpec s(kInf, {0.0, 0.5, 1.25}, {3.0, 0.0, 1.0},
                       {{0.25, 0.5}, {1.25, 2.0}});
    const Hamiltonian h = string_to_hamiltonian(s);
    CHECK(hamiltonian_to_string(h) == s);
}

TEST_CASE("bijection round trips within rounding for generic densities") {
    std::mt19937_64 rng(113);
    std::uniform_real_distribution<double> dv(0.0, 3.0), lv(0.3, 1.5), mv(0.2, 2.0);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> breaks{0.0};
        std::vector<double> values{dv(rng)};
        for (int k = 0; k < 3; ++k) {
            breaks.push_back(breaks.back() + lv(rng));
            values.push_back(dv(rng));
        }
        std::vector<Atom> atoms{{0.5 * breaks[1], mv(rng)}, {breaks[2], mv(rng)}};
        if (values.back() == 0.0) values.back() = 1.0;
        const StringSpec s(kInf, breaks, values, atoms);
        const StringSpec back = hamiltonian_to_string(string_to_hamiltonian(s));
        REQUIRE(back.density_values().size() == s.density_values().size());
        for (std::size_t k = 0; k < s.density_values().size(); ++k) {
            CHECK(back.density_values()[k] ==
                  doctest::Approx(s.density_values()[k]).epsilon(1e-14));
            CHECK(back.density_breaks()[k] ==
                  doctest::Approx(s.density_breaks()[k]).epsilon(1e-14));
        }
        REQUIRE(back.atoms().size() == s.atoms().size());
        for (std::size_t k = 0; k < s.atoms().size(); ++k) {
            CHECK(back.atoms()[k].position ==
                  doctest::Approx(s.atoms()[k].position).epsilon(1e-14));
            CHECK(back.atoms()[k].mass == doctest::Approx(s.atoms()[k].mass).epsilon(1e-14));
        }
    }
}

TEST_CASE("inverse map rejections") {
    // Non-unit trace.
    CHECK_THROWS_AS(hamiltonian_to_string(corpus::constant_28()), std::invalid_argument);
    // Trivial Hamiltonian.
    CHECK_THROWS_AS(hamiltonian_to_string(Hamiltonian::constant(diag_matrix(1.0, 0.0))),
                    hypothesis_error);
    // diag(0,1) tail is outside the bijection's range.
    CHECK_THROWS_AS(
        hamiltonian_to_string(Hamiltonian::diagonal({0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0})),
        std::invalid_argument);
}

TEST_CASE("arclength grid of the string") {
    const auto t = string_t_points(corpus::free_string(), 6);
    for (std::size_t n = 0; n < t.size(); ++n) CHECK(t[n] == double(n));

    CHECK_THROWS_AS(string_t_points(corpus::stieltjes_string(), 2), hypothesis_error);

    // t_n equals the composition of the image's eta grid with the clock inverse:
    // crossing times agree with eta through x = (1+d) t on unit density.
    const StringSpec s = corpus::unit_density_atom_string();
    const Hamiltonian h = string_to_hamiltonian(s);
    const auto eta = eta_grid(h, 5);
    const auto tn = string_t_points(s, 5);
    for (std::size_t n = 0; n < tn.size(); ++n) {
        // N(t) = t + M(t) maps t_n to eta_n for points of increase.
        CHECK(tn[n] + s.mass(tn[n]) >= eta[n]); // N right-continuous at atoms
        CHECK(integrate_h1(h, 0.0, eta[n]) == tn[n]);
    }
}

TEST_CASE("discrete characteristic of strings") {
    SUBCASE("free string vanishes") {
        const auto k = string_characteristic(corpus::free_string());
        CHECK(k.terms.empty());
        CHECK(k.total == 0.0);
    }
    SUBCASE("unit density with a point mass: single term 2") {
        const auto k = string_characteristic(corpus::unit_density_atom_string());
        REQUIRE(k.terms.size() == 1);
        CHECK(k.terms[0] == 2.0);
        CHECK(k.total == 2.0);
    }
    SUBCASE("term-by-term equality with the image Hamiltonian") {
        const StringSpec s(kInf, {0.0, 0.5}, {1.0, 4.0}, {{0.25, 0.5}});
        const auto ks = string_characteristic(s);
        const auto kh = szego_characteristic(string_to_hamiltonian(s));
        REQUIRE(ks.terms.size() == kh.terms.size());
        for (std::size_t n = 0; n < ks.terms.size(); ++n)
            CHECK(ks.terms[n] == doctest::Approx(kh.terms[n]).epsilon(1e-13));
        CHECK(ks.total == doctest::Approx(kh.total).epsilon(1e-13));
    }
    SUBCASE("dual string has the same characteristic") {
        const StringSpec s = corpus::unit_density_atom_string();
        const StringSpec d = dual_string(s);
        CHECK(string_characteristic(d).total == string_characteristic(s).total);
        // Involution up to the exact dyadic data.
        CHECK(dual_string(d) == s);
    }
}

TEST_CASE("wave propagation") {
    SUBCASE("massless string: phi = 1, psi = x") {
        const StringSpec s = corpus::stieltjes_string();
        const auto st = phi_psi(s, 0.5, Complex(0.3, 0.8));
        CHECK(st.phi == Complex(1.0, 0.0));
        CHECK(st.psi == Complex(0.5, 0.0));
        CHECK(st.dpsi == Complex(1.0, 0.0));
    }
    SUBCASE("single mass: hand values past the atom") {
        const StringSpec s = corpus::stieltjes_string();
        const Complex z(0.5, 0.25);
        const auto st = phi_psi(s, 1.5, z);
        CHECK(std::abs(st.phi - (1.0 - 0.5 * z)) < 1e-15);
        CHECK(std::abs(st.dphi + z) < 1e-15);
        CHECK(std::abs(st.psi - (1.5 - 0.5 * z)) < 1e-15);
        CHECK(std::abs(st.dpsi - (1.0 - z)) < 1e-15);
    }
    SUBCASE("Wronskian is one across pieces and atoms") {
        std::mt19937_64 rng(127);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const StringSpec s(kInf, {0.0, 0.7, 1.9}, {2.0, 0.0, 0.5},
                           {{0.3, 1.1}, {1.9, 0.4}});
        for (int i = 0; i < 20; ++i) {
            const Complex z(4.0 * (2.0 * u(rng) - 1.0), 3.0 * u(rng));
            const auto st = phi_psi(s, 3.0 * u(rng), z);
            CHECK(std::abs(st.wronskian() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("principal Weyl function") {
    SUBCASE("single mass at 1: q(z) = 1 - 1/z") {
        const StringSpec s = corpus::stieltjes_string();
        for (Complex z : {kI, 2.0 * kI, Complex(-1.0, 0.0), Complex(0.7, 1.3)})
            CHECK(std::abs(q_function(s, z) - (1.0 - 1.0 / z)) < 1e-14);
    }
    SUBCASE("free string: q(z) = 1/sqrt(-z)") {
        const StringSpec s = corpus::free_string();
        for (Complex z : {kI, Complex(-2.0, 0.0), Complex(1.0, 2.0)})
            CHECK(std::abs(q_function(s, z) - 1.0 / std::sqrt(-z)) < 1e-14);
    }
    SUBCASE("Herglotz in the upper half-plane, real on the negative axis") {
        const StringSpec s = corpus::unit_density_atom_string();
        std::mt19937_64 rng(131);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 20; ++i) {
            const Complex z(6.0 * (2.0 * u(rng) - 1.0), 0.1 + 3.0 * u(rng));
            CHECK(std::imag(q_function(s, z)) > 0.0);
        }
        for (double x : {-0.5, -2.0, -7.0})
            CHECK(std::imag(q_function(s, Complex(x, 0.0))) == 0.0);
        CHECK_THROWS_AS(q_function(s, Complex(1.0, 0.0)), std::domain_error);
    }
    SUBCASE("square-root bridge to the image Weyl function") {
        // z q(z^2) = -1/m(z) for the image Hamiltonian.
        for (const StringSpec& s :
             {corpus::stieltjes_string(), corpus::unit_density_atom_string()}) {
            const Hamiltonian h = string_to_hamiltonian(s);
            for (Complex z : {kI, Complex(1.0, 1.0), 2.0 * kI}) {
                const Complex lhs = z * q_function(s, z * z);
                const Complex m = m_function(h, z).value;
                CHECK(std::abs(lhs + 1.0 / m) < 1e-10);
            }
        }
    }
}

TEST_CASE("Szego logarithmic integral of string spectra") {
    // Unit density, no atoms: the dual image is balanced, integral 0.
    CHECK(std::abs(szego_log_integral(corpus::free_string())) < 1e-12);
    // Unit density plus finitely many atoms: finite integral.
    const double v = szego_log_integral(corpus::unit_density_atom_string());
    CHECK(std::isfinite(v));
    // Massless string with one atom: discrete measure, divergent integral.
    CHECK(szego_log_integral(corpus::stieltjes_string()) == kMinusInf);
}

TEST_CASE("geometric string: finite characteristic, divergent singular mass") {
    const double alpha = 0.75;
    const std::size_t horizon = 2000;
    const StringSpec s = corpus::geometric_string(alpha, horizon);

    // Term oracle from the cell sizes: the density part contributes
    // (delta_n + delta_{n+1})(1/delta_n + 1/delta_{n+1}) - 4 and the singular
    // part contributes (delta_n + delta_{n+1}) * 1.
    const auto cells = corpus::geometric_cells(alpha, horizon);
    const auto terms = string_characteristic_partial(s, 64);
    for (std::size_t n = 0; n < 10; ++n) {
        const double dn = cells[n], dn1 = cells[n + 1];
        const double expected = (dn + dn1) * (1.0 / dn + 1.0 / dn1 + 1.0) - 4.0;
        CHECK(terms[n] == doctest::Approx(expected).epsilon(1e-9));
    }

    // Partial sums converge (terms are summable) while the singular mass grows.
    const auto many = string_characteristic_partial(s, horizon - 8);
    double sum = 0.0;
    std::vector<double> partial;
    for (double term : many) {
        CHECK(term >= -1e-12);
        sum += term;
        partial.push_back(sum);
    }
    const double s_half = partial[many.size() / 2 - 1];
    const double s_full = partial.back();
    CHECK(std::isfinite(s_full));
    CHECK(s_full - s_half < 0.05); // Cauchy tail of a convergent series
    // total singular mass up to the horizon grows linearly
    CHECK(s.mass(s.length()) > 0.45 * double(horizon));
    // and the total length stays finite as the horizon grows
    CHECK(s.length() < 6.0);
}

TEST_CASE("two-mass string against the hand-computed rational Weyl function") {
    // Masses 1 at position 1 and 2 at position 2 on a massless string:
    // propagating by hand gives q(z) = (2z^2 - 5z + 1) / (2z^2 - 3z).
    const StringSpec s(kInf, {0.0}, {0.0}, {{1.0, 1.0}, {2.0, 2.0}});
    auto oracle = [](Complex z) {
        return (2.0 * z * z - 5.0 * z + 1.0) / (2.0 * z * z - 3.0 * z);
    };
    for (Complex z : {kI, Complex(-1.0, 0.0), Complex(0.3, 0.9), 2.0 * kI})
        CHECK(std::abs(q_function(s, z) - oracle(z)) < 1e-13);
    // Square-root bridge against the image Hamiltonian.
    const Hamiltonian h = string_to_hamiltonian(s);
    for (Complex z : {kI, Complex(1.0, 1.0)}) {
        const Complex bridge = z * q_function(s, z * z) + 1.0 / m_function(h, z).value;
        CHECK(std::abs(bridge) < 1e-12);
    }
}

TEST_CASE("interior massless stretch: characteristic still matches the image") {
    const StringSpec s(kInf, {0.0, 0.5, 1.0}, {1.0, 0.0, 4.0}, {{0.25, 0.5}});
    const auto ks = string_characteristic(s);
    const auto kh = szego_characteristic(string_to_hamiltonian(s));
    REQUIRE(ks.terms.size() == kh.terms.size());
    for (std::size_t n = 0; n < ks.terms.size(); ++n)
        CHECK(ks.terms[n] == doctest::Approx(kh.terms[n]).epsilon(1e-12));
}
