// corpus.hpp — built-in example systems used by the verification suite and the
// command-line tool: constant, bump, the two-step rank-one chain, canonical
// strings, and the slowly-contracting geometric string.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "canon/hamiltonian.hpp"
#include "canon/string.hpp"

namespace canon::corpus {

// diag(2, 8) everywhere: Weyl function 2i, density 2, zero entropy.
inline Hamiltonian constant_28() {
    return Hamiltonian::constant(diag_matrix(2.0, 8.0));
}

// diag(2, 1/2) on [0,1), identity afterwards.
inline Hamiltonian bump() {
    return Hamiltonian::diagonal({0.0, 1.0}, {2.0, 1.0}, {0.5, 1.0});
}

// Image of the single-mass string: diag(1,0), diag(0,1), then diag(1,0).
inline Hamiltonian stieltjes_image() {
    return Hamiltonian::diagonal({0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
}

// diag(1+beta, 1/(1+beta)) on [0,1), identity afterwards.
inline Hamiltonian near_constant(double beta) {
    return Hamiltonian::diagonal({0.0, 1.0}, {1.0 + beta, 1.0},
                                 {1.0 / (1.0 + beta), 1.0});
}

// Massless string with a unit point mass at position 1.
inline StringSpec stieltjes_string() {
    return StringSpec(std::numeric_limits<double>::infinity(), {0.0}, {0.0},
                      {{1.0, 1.0}});
}

// Unit density with a unit point mass at 1/2.
inline StringSpec unit_density_atom_string() {
    return StringSpec(std::numeric_limits<double>::infinity(), {0.0}, {1.0},
                      {{0.5, 1.0}});
}

// Free string: unit density, no atoms; q(z) = 1/sqrt(-z).
inline StringSpec free_string() {
    return StringSpec(std::numeric_limits<double>::infinity(), {0.0}, {1.0}, {});
}

// Finite-horizon truncation of the contracting string with cell sizes
// delta_n = prod_{j<=n} (1 - (j+2)^{-alpha}), density delta_n^{-2} on
// [t_n, t_{n+1}], and singular atoms of mass 1/2 per cell (so the mass of
// (t_n, t_{n+2}] is exactly 1). Every factor lies in (0,1); for alpha in
// (1/2, 1) the total length converges while the total singular mass diverges.
inline StringSpec geometric_string(double alpha, std::size_t n_pieces) {
    std::vector<double> breaks;
    std::vector<double> values;
    std::vector<Atom> atoms;
    double t = 0.0;
    double delta = 1.0;
    for (std::size_t n = 0; n < n_pieces; ++n) {
        delta *= 1.0 - std::pow(static_cast<double>(n) + 2.0, -alpha);
        breaks.push_back(t);
        values.push_back(1.0 / (delta * delta));
        atoms.push_back({t + 0.5 * delta, 0.5});
        t += delta;
    }
    return StringSpec(t, std::move(breaks), std::move(values), std::move(atoms));
}

// Exact cell sizes of the geometric string (for term-level oracles).
inline std::vector<double> geometric_cells(double alpha, std::size_t n_pieces) {
    std::vector<double> d;
    double delta = 1.0;
    for (std::size_t n = 0; n < n_pieces; ++n) {
        delta *= 1.0 - std::pow(static_cast<double>(n) + 2.0, -alpha);
        d.push_back(delta);
    }
    return d;
}

} // namespace canon::corpus
