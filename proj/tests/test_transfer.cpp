#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "canon/hamiltonian.hpp"
#include "canon/transfer.hpp"
#include "test_util.hpp"

using namespace canon;
using namespace std::complex_literals;

namespace {

double matrix_distance(const TransferMatrix& a, const TransferMatrix& b) {
    return std::max({std::abs(a.theta_p - b.theta_p), std::abs(a.phi_p - b.phi_p),
                     std::abs(a.theta_m - b.theta_m), std::abs(a.phi_m - b.phi_m)});
}

// Closed form for a constant diag(a1, a2) Hamiltonian with a1, a2 > 0.
TransferMatrix constant_oracle(double a1, double a2, double t, Complex z) {
    const Complex w = t * std::sqrt(a1 * a2) * z;
    return {std::cos(w), std::sqrt(a2 / a1) * std::sin(w),
            -std::sqrt(a1 / a2) * std::sin(w), std::cos(w)};
}

} // namespace

TEST_CASE("identity Hamiltonian has the rotation closed form") {
    const Hamiltonian id = Hamiltonian::constant(diag_matrix(1.0, 1.0));
    for (double t : {0.3, 1.0, 4.2}) {
        for (Complex z : {Complex(0.7, 0.2), Complex(-1.5, 1.0), Complex(2.0, 0.0)}) {
            const TransferMatrix m = transfer_matrix(id, t, z);
            const TransferMatrix o{std::cos(t * z), std::sin(t * z), -std::sin(t * z),
                                   std::cos(t * z)};
            CHECK(matrix_distance(m, o) < 1e-13);
        }
    }
}

TEST_CASE("constant Hamiltonian matches the trigonometric closed form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> av(0.2, 3.0), tv(0.0, 10.0), zv(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double a1 = av(rng), a2 = av(rng), t = tv(rng);
        const Complex z = 0.3 * Complex(5.0 * zv(rng), 5.0 * zv(rng));
        const Hamiltonian h = Hamiltonian::constant(diag_matrix(a1, a2));
        const TransferMatrix m = transfer_matrix(h, t, z);
        const TransferMatrix o = constant_oracle(a1, a2, t, z);
        const double scale = std::max(1.0, std::abs(o.theta_p));
        CHECK(matrix_distance(m, o) / scale < 1e-13);
    }
}

TEST_CASE("rank-one pieces give the nilpotent closed form exactly") {
    const Hamiltonian h0 = Hamiltonian::constant(diag_matrix(1.0, 0.0));
    const Complex z(0.75, 0.5);
    const TransferMatrix m = transfer_matrix(h0, 2.0, z);
    CHECK(m.theta_p == 1.0 + 0.0i);
    CHECK(m.phi_p == 0.0 + 0.0i);
    CHECK(m.theta_m == -2.0 * z);
    CHECK(m.phi_m == 1.0 + 0.0i);

    const Hamiltonian hp = Hamiltonian::constant(diag_matrix(0.0, 1.0));
    const TransferMatrix mp = transfer_matrix(hp, 0.5, z);
    CHECK(mp.phi_p == 0.5 * z);
    CHECK(mp.theta_m == 0.0 + 0.0i);
}

TEST_CASE("two nilpotent steps multiply to the hand product") {
    // diag(1,0) on [0,1), diag(0,1) on [1,2): M = [[1-z^2, z], [-z, 1]].
    const Hamiltonian h({0.0, 1.0, 2.0}, {diag_matrix(1.0, 0.0), diag_matrix(0.0, 1.0)},
                        diag_matrix(1.0, 0.0));
    const Complex z(0.5, 0.25); // dyadic, so the product is exact
    const TransferMatrix m = transfer_matrix(h, 2.0, z);
    CHECK(m.theta_p == 1.0 - z * z);
    CHECK(m.phi_p == z);
    CHECK(m.theta_m == -z);
    CHECK(m.phi_m == 1.0 + 0.0i);
}

TEST_CASE("cocycle property on random splits") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const Hamiltonian h = testutil::random_hamiltonian(rng);
        const double t = 10.0 * u(rng);
        const double r = t * u(rng);
        const Complex z(5.0 * (2.0 * u(rng) - 1.0), 5.0 * u(rng));
        const TransferMatrix whole = transfer_matrix(h, t, z);
        const TransferMatrix first = transfer_matrix(h, r, z);
        const TransferMatrix second = transfer_matrix(shift(h, r), t - r, z);
        CHECK(matrix_distance(whole, second * first) < 1e-12);
    }
}

TEST_CASE("unimodularity over the random family") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Hamiltonian h = testutil::random_hamiltonian(rng);
        const double t = 10.0 * u(rng);
        const double ang = 2.0 * std::numbers::pi * u(rng);
        const Complex z = 5.0 * u(rng) * Complex(std::cos(ang), std::sin(ang));
        CHECK(std::abs(transfer_matrix(h, t, z).det() - 1.0) < 1e-12);
    }
}

TEST_CASE("entries are real on the real axis") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10; ++i) {
        const Hamiltonian h = testutil::random_hamiltonian(rng);
        const TransferMatrix m = transfer_matrix(h, 3.7, Complex(1.25, 0.0));
        CHECK(std::imag(m.theta_p) == 0.0);
        CHECK(std::imag(m.phi_p) == 0.0);
        CHECK(std::imag(m.theta_m) == 0.0);
        CHECK(std::imag(m.phi_m) == 0.0);
    }
}

TEST_CASE("Schwarz reflection M(t, conj z) = conj M(t, z)") {
    // All four entries are entire with real Taylor coefficients.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const Hamiltonian h = testutil::random_hamiltonian(rng);
        const Complex z(4.0 * (2.0 * u(rng) - 1.0), 3.0 * u(rng) + 0.1);
        const TransferMatrix a = transfer_matrix(h, 2.3, std::conj(z));
        const TransferMatrix b = transfer_matrix(h, 2.3, z);
        CHECK(std::abs(a.theta_p - std::conj(b.theta_p)) < 1e-13);
        CHECK(std::abs(a.phi_p - std::conj(b.phi_p)) < 1e-13);
        CHECK(std::abs(a.theta_m - std::conj(b.theta_m)) < 1e-13);
        CHECK(std::abs(a.phi_m - std::conj(b.phi_m)) < 1e-13);
    }
}

TEST_CASE("dual transfer matrix is the J-conjugation of the original") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 15; ++i) {
        const Hamiltonian h = testutil::random_hamiltonian(rng);
        const Complex z(0.8, 0.6);
        const TransferMatrix m = transfer_matrix(h, 1.9, z);
        const TransferMatrix d = transfer_matrix(dual(h), 1.9, z);
        CHECK(std::abs(d.theta_p - m.phi_m) < 1e-13);
        CHECK(std::abs(d.phi_p + m.theta_m) < 1e-13);
        CHECK(std::abs(d.theta_m + m.phi_p) < 1e-13);
        CHECK(std::abs(d.phi_m - m.theta_p) < 1e-13);
    }
}

TEST_CASE("small-argument sinc branch agrees with the direct evaluation") {
    const SymMatrix2 p = diag_matrix(1.0, 1.0);
    // delta * |z| straddles the series threshold
    for (double delta : {1e-6, 5e-5, 2e-4, 1e-3}) {
        const Complex z(0.09, 0.05);
        const TransferMatrix m = step_matrix(p, delta, z);
        const TransferMatrix o{std::cos(delta * z), std::sin(delta * z),
                               -std::sin(delta * z), std::cos(delta * z)};
        CHECK(matrix_distance(m, o) < 1e-16);
    }
}

TEST_CASE("energy identity") {
    const Hamiltonian id = Hamiltonian::constant(diag_matrix(1.0, 1.0));

    SUBCASE("both sides vanish at t = 0") {
        CHECK(energy_residual(id, 0.0, Complex(0.3, 1.2)) == 0.0);
    }
    SUBCASE("closed-form value cosh(1)sinh(1) at z = i, t = 1") {
        const TransferMatrix m = transfer_matrix(id, 1.0, Complex(0.0, 1.0));
        const double lhs = std::imag(m.theta_p * std::conj(m.theta_m));
        CHECK(lhs == doctest::Approx(std::cosh(1.0) * std::sinh(1.0)).epsilon(1e-13));
        CHECK(energy_residual(id, 1.0, Complex(0.0, 1.0)) < 1e-12);
    }
    SUBCASE("real z: both sides vanish") {
        const Hamiltonian h = Hamiltonian::diagonal({0.0, 1.0}, {2.0, 1.0}, {0.5, 1.0});
        CHECK(energy_residual(h, 2.5, Complex(1.7, 0.0)) < 1e-14);
    }
    SUBCASE("random piecewise Hamiltonians") {
        std::mt19937_64 rng(25);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 25; ++i) {
            const Hamiltonian h = testutil::random_hamiltonian(rng);
            const double t = 10.0 * u(rng);
            const Complex z(4.0 * (2.0 * u(rng) - 1.0), 0.2 + 4.0 * u(rng));
            CHECK(energy_residual(h, t, z) < 1e-10);
        }
    }
}

TEST_CASE("mean type of theta_p matches xi") {
    const double y = 1e3;
    const Hamiltonian h41 = Hamiltonian::constant(diag_matrix(0.25, 0.25));
    for (double t : {0.5, 1.5, 2.5}) {
        const TransferMatrix m = transfer_matrix(h41, t, Complex(0.0, y));
        const double rate = std::log(std::abs(m.theta_p)) / y;
        CHECK(std::abs(rate - xi(h41, t)) < 0.01);
    }
    const Hamiltonian two = Hamiltonian::diagonal({0.0, 1.0}, {0.5, 0.125},
                                                  {0.125, 0.125});
    for (double t : {0.8, 2.0}) {
        const TransferMatrix m = transfer_matrix(two, t, Complex(0.0, y));
        const double rate = std::log(std::abs(m.theta_p)) / y;
        CHECK(std::abs(rate - xi(two, t)) < 0.01);
    }
}
