// string.hpp — Krein strings: the bijection with diagonal unit-trace
// Hamiltonians, the sqrt(M')-arclength grid and discrete characteristic,
// wave propagation phi/psi, the principal Weyl function q, dual strings,
// and the Szego logarithmic integral of the spectral measure.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "canon/entropy.hpp"
#include "canon/hamiltonian.hpp"
#include "canon/transfer.hpp"

namespace canon {

struct Atom {
    double position = 0.0;
    double mass = 0.0;
    friend bool operator==(const Atom&, const Atom&) = default;
};

// Mass distribution M on [0, L): piecewise-constant density plus point masses.
// density_values[k] rules [density_breaks[k], density_breaks[k+1]); the last
// value extends to L (which may be +inf).
class StringSpec {
public:
    StringSpec(double length, std::vector<double> density_breaks,
               std::vector<double> density_values, std::vector<Atom> atoms)
        : length_(length), breaks_(std::move(density_breaks)),
          values_(std::move(density_values)), atoms_(std::move(atoms)) {
        if (!(length_ > 0.0))
            throw std::invalid_argument("StringSpec: length must be positive");
        if (breaks_.empty() || breaks_.front() != 0.0)
            throw std::invalid_argument("StringSpec: density breakpoints must start at 0");
        if (breaks_.size() != values_.size())
            throw std::invalid_argument("StringSpec: need one density value per breakpoint");
        for (std::size_t k = 0; k + 1 < breaks_.size(); ++k)
            if (!(breaks_[k] < breaks_[k + 1]))
                throw std::invalid_argument(
                    "StringSpec: density breakpoints must be strictly increasing");
        if (breaks_.back() >= length_)
            throw std::invalid_argument("StringSpec: density breakpoints must lie below L");
        for (std::size_t k = 0; k < values_.size(); ++k)
            if (!(values_[k] >= 0.0))
                throw std::invalid_argument("StringSpec: density value " +
                                            std::to_string(k) + " must be nonnegative");
        for (std::size_t k = 0; k < atoms_.size(); ++k) {
            if (!(atoms_[k].mass > 0.0))
                throw std::invalid_argument("StringSpec: atom " + std::to_string(k) +
                                            " must have positive mass");
            if (atoms_[k].position < 0.0 || atoms_[k].position >= length_)
                throw std::invalid_argument("StringSpec: atom " + std::to_string(k) +
                                            " must sit inside [0, L)");
            if (k > 0 && !(atoms_[k - 1].position < atoms_[k].position))
                throw std::invalid_argument(
                    "StringSpec: atom positions must be strictly increasing");
        }
    }

    double length() const { return length_; }
    bool infinite_length() const { return std::isinf(length_); }
    const std::vector<double>& density_breaks() const { return breaks_; }
    const std::vector<double>& density_values() const { return values_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double final_density() const { return values_.back(); }

    double density_at(double t) const {
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
    }

    // M(t) = m[0, t], right-continuous, atoms at t included.
    double mass(double t) const {
        if (t < 0.0) return 0.0;
        double acc = 0.0;
        for (std::size_t k = 0; k < values_.size(); ++k) {
            const double hi = k + 1 < breaks_.size() ? breaks_[k + 1] : length_;
            const double cut = std::min(t, hi);
            if (cut > breaks_[k]) acc += values_[k] * (cut - breaks_[k]);
        }
        for (const Atom& a : atoms_)
            if (a.position <= t) acc += a.mass;
        return acc;
    }

    // Position of the last density break or atom; the string is structureless
    // (constant density, no atoms) beyond it.
    double last_event() const {
        double e = breaks_.back();
        if (!atoms_.empty()) e = std::max(e, atoms_.back().position);
        return e;
    }

    friend bool operator==(const StringSpec&, const StringSpec&) = default;

private:
    double length_;
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::vector<Atom> atoms_;
};

struct StringValidation {
    bool valid_pair = false;
    bool mass_positive = false;
    std::string message;
};

// A mass distribution and length form a valid string pair when
// L + lim M(t) = inf and lim M(t) > 0. With finite data the first condition
// forces L = inf.
inline StringValidation validate_string(const StringSpec& s) {
    StringValidation v;
    v.mass_positive = !s.atoms().empty();
    for (double d : s.density_values()) v.mass_positive = v.mass_positive || d > 0.0;
    if (!s.infinite_length()) {
        v.message =
            "not a valid string pair: L + lim M(t) must be infinite (finite strings "
            "with finite mass have meromorphic Weyl functions and vanishing density, "
            "so the logarithmic integral diverges)";
        return v;
    }
    if (!v.mass_positive) {
        v.message = "not a valid string pair: lim M(t) must be positive (the zero "
                    "string has zero spectral density)";
        return v;
    }
    v.valid_pair = true;
    return v;
}

namespace detail {

struct StringEvent {
    double position;
    bool is_atom;
    double mass; // for atoms
};

inline std::vector<StringEvent> string_events(const StringSpec& s) {
    std::vector<StringEvent> ev;
    for (std::size_t k = 1; k < s.density_breaks().size(); ++k)
        ev.push_back({s.density_breaks()[k], false, 0.0});
    for (const Atom& a : s.atoms()) ev.push_back({a.position, true, a.mass});
    std::stable_sort(ev.begin(), ev.end(),
                     [](const StringEvent& a, const StringEvent& b) {
                         if (a.position != b.position) return a.position < b.position;
                         return !a.is_atom && b.is_atom; // break first, then atom
                     });
    return ev;
}

} // namespace detail

// Travel-time image of the string: density-d stretches of length l become
// diag(1/(1+d), d/(1+d)) pieces of length (1+d) l, atoms of mass m become
// diag(0, 1) pieces of length m. Unit trace holds exactly (h2 = 1 - h1).
inline Hamiltonian string_to_hamiltonian(const StringSpec& s) {
    const StringValidation v = validate_string(s);
    if (!v.valid_pair) throw hypothesis_error("string_to_hamiltonian: " + v.message);

    std::vector<double> nb{0.0};
    std::vector<SymMatrix2> np;
    auto emit = [&](const SymMatrix2& piece, double len) {
        if (len <= 0.0) return;
        if (!np.empty() && np.back() == piece) {
            nb.back() += len;
            return;
        }
        np.push_back(piece);
        nb.push_back(nb.back() + len);
    };
    auto density_piece = [](double d) {
        const double h1 = 1.0 / (1.0 + d);
        return diag_matrix(h1, 1.0 - h1);
    };

    double cur = 0.0;
    for (const auto& ev : detail::string_events(s)) {
        if (ev.position > cur) {
            const double d = s.density_at(cur);
            emit(density_piece(d), (1.0 + d) * (ev.position - cur));
            cur = ev.position;
        }
        if (ev.is_atom) emit(diag_matrix(0.0, 1.0), ev.mass);
    }
    const SymMatrix2 tail = density_piece(s.final_density());
    while (!np.empty() && np.back() == tail) {
        np.pop_back();
        nb.pop_back();
    }
    return Hamiltonian(std::move(nb), std::move(np), tail);
}

// Inverse of the travel-time image. Requires an exactly unit-trace diagonal
// nontrivial Hamiltonian. A tail with h1 = 0 is rejected: all remaining mass
// would have to sit at t = L itself, which no mass distribution on [0, L)
// realizes.
inline StringSpec hamiltonian_to_string(const Hamiltonian& h) {
    if (!h.diagonal())
        throw std::invalid_argument("hamiltonian_to_string: Hamiltonian must be diagonal");
    for (std::size_t k = 0; k <= h.piece_count(); ++k) {
        const SymMatrix2& p = k < h.piece_count() ? h.piece(k) : h.tail();
        if (p.h11 + p.h22 != 1.0)
            throw std::invalid_argument(
                "hamiltonian_to_string: trace must equal 1 exactly; apply a "
                "unit-trace reparametrization first");
    }
    if (!validate(h).nontrivial)
        throw hypothesis_error("hamiltonian_to_string: Hamiltonian is trivial");
    if (h.tail().h11 == 0.0)
        throw std::invalid_argument(
            "hamiltonian_to_string: tail is the rank-one projector diag(0,1); no "
            "string pair has this image");

    std::vector<std::pair<double, double>> segs; // (density, length), merged
    std::vector<Atom> atoms;
    double t = 0.0;
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        const SymMatrix2& p = h.piece(k);
        const double xlen = h.breakpoint(k + 1) - h.breakpoint(k);
        if (p.h11 == 0.0) {
            const double m = p.h22 * xlen; // h2 == 1 by the unit-trace invariant
            if (!atoms.empty() && atoms.back().position == t)
                atoms.back().mass += m;
            else
                atoms.push_back({t, m});
        } else {
            const double d = p.h22 / p.h11;
            const double len = p.h11 * xlen;
            if (!segs.empty() && segs.back().first == d)
                segs.back().second += len;
            else
                segs.push_back({d, len});
            t += len;
        }
    }
    const double d_tail = h.tail().h22 / h.tail().h11;
    if (!segs.empty() && segs.back().first == d_tail) segs.pop_back();
    std::vector<double> breaks{0.0};
    std::vector<double> values;
    for (const auto& [d, len] : segs) {
        values.push_back(d);
        breaks.push_back(breaks.back() + len);
    }
    values.push_back(d_tail); // extends from the last break to L = inf
    return StringSpec(std::numeric_limits<double>::infinity(), std::move(breaks),
                      std::move(values), std::move(atoms));
}

// t_n = min{ t : int_0^t sqrt(M') = n }, n = 0..n_max.
inline std::vector<double> string_t_points(const StringSpec& s, std::size_t n_max) {
    std::vector<double> t{0.0};
    double acc = 0.0;
    std::size_t n = 1;
    const auto& breaks = s.density_breaks();
    for (std::size_t k = 0; k < s.density_values().size() && n <= n_max; ++k) {
        const double a = breaks[k];
        const double hi = k + 1 < breaks.size() ? breaks[k + 1] : s.length();
        const double rate = std::sqrt(s.density_values()[k]);
        if (rate == 0.0) continue;
        const double len = hi - a;
        while (n <= n_max && static_cast<double>(n) <= acc + rate * len) {
            t.push_back(a + (static_cast<double>(n) - acc) / rate);
            ++n;
        }
        acc += rate * len;
    }
    if (n <= n_max) {
        if (s.infinite_length())
            throw hypothesis_error(
                "string_t_points: sqrt(M') is integrable on [0, L); the arclength "
                "grid requires a non-integrable sqrt(M')");
        throw std::invalid_argument(
            "string_t_points: truncated string exhausts its arclength before n_max");
    }
    return t;
}

namespace detail {

inline double string_characteristic_term(const StringSpec& s, const std::vector<double>& t,
                                         std::size_t n) {
    return (t[n + 2] - t[n]) * (s.mass(t[n + 2]) - s.mass(t[n])) - 4.0;
}

} // namespace detail

// Discrete characteristic sum((t_{n+2}-t_n)(M(t_{n+2})-M(t_n)) - 4); terms with
// t_n past the last density break / atom vanish identically and are dropped.
inline SzegoCharacteristic string_characteristic(const StringSpec& s) {
    SzegoCharacteristic out;
    const double stop = s.last_event();
    std::size_t n_need = 2;
    std::vector<double> t = string_t_points(s, n_need);
    for (std::size_t n = 0; t[n] < stop; ++n) {
        if (n + 2 >= t.size()) {
            n_need = n + 4;
            t = string_t_points(s, n_need);
        }
        out.terms.push_back(detail::string_characteristic_term(s, t, n));
    }
    for (double term : out.terms) out.total += term;
    return out;
}

// Leading partial terms for strings given up to a finite horizon.
inline std::vector<double> string_characteristic_partial(const StringSpec& s,
                                                         std::size_t max_terms) {
    std::vector<double> t = string_t_points(s, max_terms + 2);
    std::vector<double> terms;
    terms.reserve(max_terms);
    for (std::size_t n = 0; n < max_terms; ++n)
        terms.push_back(detail::string_characteristic_term(s, t, n));
    return terms;
}

// State of the string waves at position x: values and right derivatives of the
// Neumann-type solution phi and the Dirichlet-type solution psi.
struct StringPropagation {
    double x = 0.0;
    Complex phi{1.0, 0.0};
    Complex psi{0.0, 0.0};
    Complex dphi{0.0, 0.0};
    Complex dpsi{1.0, 0.0};

    Complex wronskian() const { return phi * dpsi - dphi * psi; }
};

namespace detail {

// Advance (y, y') across a stretch of constant density d: solves -y'' = z d y.
inline void advance_wave(Complex& y, Complex& dy, double d, double len, Complex z) {
    if (len <= 0.0) return;
    if (d == 0.0) {
        y += len * dy;
        return;
    }
    const Complex w = std::sqrt(z * d) * len;
    const Complex c = std::cos(w);
    const Complex sc = len * sinc(w); // sin(w)/w * len, stable near w = 0
    const Complex y0 = y;
    y = c * y0 + sc * dy;
    dy = -z * d * sc * y0 + c * dy;
}

} // namespace detail

// Wave state at position x. Atoms at position x affect the derivative only.
inline StringPropagation phi_psi(const StringSpec& s, double x, Complex z) {
    if (x < 0.0) throw std::domain_error("phi_psi: negative position");
    if (!(x <= s.length())) throw std::domain_error("phi_psi: position beyond L");
    StringPropagation st;
    double cur = 0.0;
    auto jump = [&](double m) {
        st.dphi -= z * m * st.phi;
        st.dpsi -= z * m * st.psi;
    };
    for (const auto& ev : detail::string_events(s)) {
        if (ev.position > x) break;
        if (ev.position > cur) {
            const double d = s.density_at(cur);
            detail::advance_wave(st.phi, st.dphi, d, ev.position - cur, z);
            detail::advance_wave(st.psi, st.dpsi, d, ev.position - cur, z);
            cur = ev.position;
        }
        if (ev.is_atom) jump(ev.mass);
    }
    if (x > cur) {
        const double d = s.density_at(cur);
        detail::advance_wave(st.phi, st.dphi, d, x - cur, z);
        detail::advance_wave(st.psi, st.dpsi, d, x - cur, z);
    }
    st.x = x;
    return st;
}

// Principal Weyl function q(z) = lim_{x->L} psi/phi for z off [0, inf).
// Supported directly for infinite strings whose density is eventually
// constant: a massless tail selects the slope ratio, a positive-density tail
// selects the coefficient of the growing exponential e^{s x}, s = sqrt(-z d).
inline Complex q_function(const StringSpec& s, Complex z) {
    if (std::imag(z) == 0.0 && std::real(z) >= 0.0)
        throw std::domain_error("q_function: z must lie off [0, inf)");
    const StringValidation v = validate_string(s);
    if (!v.valid_pair) throw hypothesis_error("q_function: " + v.message);
    if (!s.infinite_length())
        throw std::invalid_argument(
            "q_function: unsupported tail class; use the Weyl-function identity "
            "z q(z^2) = -1/m(z) on the image Hamiltonian instead");
    const StringPropagation st = phi_psi(s, s.last_event(), z);
    const double d = s.final_density();
    if (d == 0.0) return st.dpsi / st.dphi;
    const Complex sr = std::sqrt(-z * d);
    return (sr * st.psi + st.dpsi) / (sr * st.phi + st.dphi);
}

// Dual string: the preimage of the dual image Hamiltonian. Defined whenever
// the original final density is positive (else the dual image has a diag(0,1)
// tail, which is outside the bijection's range).
inline StringSpec dual_string(const StringSpec& s) {
    return hamiltonian_to_string(dual(string_to_hamiltonian(s)));
}

// int_0^inf log v(x) / ((1+x) sqrt(x)) dx for the string spectral measure
// v dx + sigma_s, evaluated through the half-line/line change of variables as
// pi * J of the dual image Hamiltonian. -inf when the measure is discrete.
inline double szego_log_integral(const StringSpec& s) {
    const Hamiltonian image = string_to_hamiltonian(s);
    return std::numbers::pi * entropy_J_exact(dual(image), 0.0);
}

} // namespace canon
