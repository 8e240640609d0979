// hamiltonian.hpp — piecewise-constant 2x2 Hamiltonians on [0, inf):
// validation, duality, shifting, Bernstein–Szego truncation, reparametrizations,
// the arclength grids xi/eta, and the discrete Szego characteristic.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace canon {

// Violation of a theorem hypothesis (as opposed to malformed input data).
struct hypothesis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Real symmetric 2x2 matrix.
struct SymMatrix2 {
    double h11 = 0.0;
    double h12 = 0.0;
    double h22 = 0.0;

    // Compensated 2x2 determinant: accurate to a few ulps even when
    // h11*h22 and h12^2 nearly cancel.
    double det() const {
        const double w = h12 * h12;
        const double e = std::fma(h12, h12, -w);
        return std::fma(h11, h22, -w) - e;
    }
    double trace() const { return h11 + h22; }
    bool psd() const { return h11 >= 0.0 && h22 >= 0.0 && det() >= 0.0; }
    bool diagonal() const { return h12 == 0.0; }
    bool zero() const { return h11 == 0.0 && h12 == 0.0 && h22 == 0.0; }
    SymMatrix2 scaled(double c) const { return {c * h11, c * h12, c * h22}; }

    friend bool operator==(const SymMatrix2&, const SymMatrix2&) = default;
};

inline SymMatrix2 diag_matrix(double a, double b) { return {a, 0.0, b}; }

// H(t) piecewise constant: piece k on [breakpoint k, breakpoint k+1); the tail
// matrix rules [last breakpoint, inf). breakpoints[0] must be 0.
class Hamiltonian {
public:
    Hamiltonian(std::vector<double> breakpoints, std::vector<SymMatrix2> pieces,
                SymMatrix2 tail)
        : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)), tail_(tail) {
        check_structure();
    }

    static Hamiltonian constant(SymMatrix2 m) { return Hamiltonian({0.0}, {}, m); }

    // Diagonal constructor: h1/h2 have one entry per breakpoint; the last entry
    // is the tail value.
    static Hamiltonian diagonal(std::vector<double> breakpoints,
                                const std::vector<double>& h1,
                                const std::vector<double>& h2) {
        if (h1.size() != breakpoints.size() || h2.size() != breakpoints.size())
            throw std::invalid_argument(
                "Hamiltonian::diagonal: h1/h2 need one entry per breakpoint");
        std::vector<SymMatrix2> pieces;
        for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
            pieces.push_back(diag_matrix(h1[k], h2[k]));
        SymMatrix2 tail = diag_matrix(h1.back(), h2.back());
        return Hamiltonian(std::move(breakpoints), std::move(pieces), tail);
    }

    std::size_t piece_count() const { return pieces_.size(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    double breakpoint(std::size_t k) const { return breaks_[k]; }
    double end_time() const { return breaks_.back(); } // tail starts here
    const SymMatrix2& piece(std::size_t k) const { return pieces_[k]; }
    const SymMatrix2& tail() const { return tail_; }

    // Index such that t lies in [breakpoint(i), breakpoint(i+1)); piece_count()
    // means the tail.
    std::size_t piece_index(double t) const {
        if (t < 0.0) throw std::domain_error("Hamiltonian: negative time");
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        return static_cast<std::size_t>(it - breaks_.begin()) - 1;
    }

    const SymMatrix2& matrix_at(double t) const {
        std::size_t i = piece_index(t);
        return i < pieces_.size() ? pieces_[i] : tail_;
    }

    bool diagonal() const {
        for (const auto& p : pieces_)
            if (!p.diagonal()) return false;
        return tail_.diagonal();
    }

    double h1_at(double t) const { return matrix_at(t).h11; }
    double h2_at(double t) const { return matrix_at(t).h22; }

    // Refines the grid so r is a breakpoint; piece values are copied, never
    // interpolated.
    Hamiltonian with_breakpoint(double r) const {
        if (r < 0.0) throw std::domain_error("with_breakpoint: negative time");
        if (std::binary_search(breaks_.begin(), breaks_.end(), r)) return *this;
        std::vector<double> nb = breaks_;
        std::vector<SymMatrix2> np = pieces_;
        if (r > breaks_.back()) {
            nb.push_back(r);
            np.push_back(tail_);
        } else {
            const std::size_t i = piece_index(r);
            nb.insert(nb.begin() + static_cast<std::ptrdiff_t>(i) + 1, r);
            np.insert(np.begin() + static_cast<std::ptrdiff_t>(i), pieces_[i]);
        }
        return Hamiltonian(std::move(nb), std::move(np), tail_);
    }

    friend bool operator==(const Hamiltonian&, const Hamiltonian&) = default;

private:
    void check_structure() const {
        if (breaks_.empty() || breaks_.front() != 0.0)
            throw std::invalid_argument("Hamiltonian: breakpoints must start at 0");
        for (std::size_t k = 0; k + 1 < breaks_.size(); ++k)
            if (!(breaks_[k] < breaks_[k + 1]))
                throw std::invalid_argument(
                    "Hamiltonian: breakpoints must be strictly increasing (index " +
                    std::to_string(k + 1) + ")");
        if (pieces_.size() + 1 != breaks_.size())
            throw std::invalid_argument(
                "Hamiltonian: need exactly one piece per bounded interval");
        for (std::size_t k = 0; k < pieces_.size(); ++k)
            if (!pieces_[k].psd())
                throw std::invalid_argument("Hamiltonian: piece " + std::to_string(k) +
                                            " is not positive semi-definite");
        if (!tail_.psd())
            throw std::invalid_argument("Hamiltonian: tail is not positive semi-definite");
        bool some_trace = tail_.trace() > 0.0;
        for (const auto& p : pieces_) some_trace = some_trace || p.trace() > 0.0;
        if (!some_trace)
            throw std::invalid_argument("Hamiltonian: trace vanishes identically");
    }

    std::vector<double> breaks_;
    std::vector<SymMatrix2> pieces_;
    SymMatrix2 tail_;
};

// Maximal interval on which H is a scalar profile times the rank-one projector
// e_phi e_phi^T.
struct IndivisibleInterval {
    double begin = 0.0;
    double end = 0.0;   // ignored when unbounded
    bool unbounded = false;
    double angle = 0.0; // phi in [0, pi)
};

struct ValidationReport {
    bool singular = false;   // trace of H not integrable
    bool nontrivial = false; // (0,inf) is not indivisible of type 0 or pi/2
    bool diagonal = false;
    std::vector<IndivisibleInterval> indivisible_intervals;
};

namespace detail {

inline bool rank_one(const SymMatrix2& p) { return p.det() == 0.0 && p.trace() > 0.0; }

inline double rank_one_angle(const SymMatrix2& p) {
    const double phi = std::atan2(std::sqrt(p.h22), std::sqrt(p.h11));
    return p.h12 < 0.0 ? std::numbers::pi - phi : phi;
}

// Same rank-one direction, decided by exact cross products on the piece data.
inline bool same_direction(const SymMatrix2& a, const SymMatrix2& b) {
    return a.h11 * b.h22 == a.h22 * b.h11 && a.h11 * b.h12 == a.h12 * b.h11 &&
           a.h12 * b.h22 == a.h22 * b.h12;
}

} // namespace detail

inline ValidationReport validate(const Hamiltonian& h) {
    ValidationReport rep;
    rep.singular = h.tail().trace() > 0.0;
    rep.diagonal = h.diagonal();

    auto type0_like = [](const SymMatrix2& p) { return p.h12 == 0.0 && p.h22 == 0.0; };
    auto type_pi2_like = [](const SymMatrix2& p) { return p.h12 == 0.0 && p.h11 == 0.0; };
    bool all0 = type0_like(h.tail());
    bool all2 = type_pi2_like(h.tail());
    for (std::size_t k = 0; k < h.piece_count() && (all0 || all2); ++k) {
        all0 = all0 && type0_like(h.piece(k));
        all2 = all2 && type_pi2_like(h.piece(k));
    }
    rep.nontrivial = !(all0 || all2);

    // Merge consecutive rank-one pieces pointing in the same direction; zero
    // pieces terminate a run (their direction is undetermined).
    const std::size_t total = h.piece_count() + 1; // pieces, then tail
    auto entry = [&](std::size_t k) -> const SymMatrix2& {
        return k < h.piece_count() ? h.piece(k) : h.tail();
    };
    std::size_t k = 0;
    while (k < total) {
        if (!detail::rank_one(entry(k))) {
            ++k;
            continue;
        }
        std::size_t j = k;
        while (j + 1 < total && detail::rank_one(entry(j + 1)) &&
               detail::same_direction(entry(k), entry(j + 1)))
            ++j;
        IndivisibleInterval iv;
        iv.begin = h.breakpoint(k);
        iv.angle = detail::rank_one_angle(entry(k));
        if (j + 1 == total)
            iv.unbounded = true;
        else
            iv.end = h.breakpoint(j + 1);
        rep.indivisible_intervals.push_back(iv);
        k = j + 1;
    }
    return rep;
}

// Dual Hamiltonian J* H J: [[h11,h12],[h12,h22]] -> [[h22,-h12],[-h12,h11]].
inline SymMatrix2 dual(const SymMatrix2& p) { return {p.h22, -p.h12, p.h11}; }

inline Hamiltonian dual(const Hamiltonian& h) {
    std::vector<SymMatrix2> pieces;
    pieces.reserve(h.piece_count());
    for (std::size_t k = 0; k < h.piece_count(); ++k) pieces.push_back(dual(h.piece(k)));
    return Hamiltonian(h.breakpoints(), std::move(pieces), dual(h.tail()));
}

// H_r : x -> H(x + r). The result can be trivial; callers check validate().
inline Hamiltonian shift(const Hamiltonian& h, double r) {
    if (r < 0.0) throw std::domain_error("shift: negative offset");
    if (r == 0.0) return h;
    if (r >= h.end_time()) return Hamiltonian::constant(h.tail());
    const Hamiltonian s = h.with_breakpoint(r);
    std::vector<double> nb;
    std::vector<SymMatrix2> np;
    for (std::size_t k = 0; k < s.piece_count(); ++k) {
        if (s.breakpoint(k) < r) continue;
        nb.push_back(s.breakpoint(k) - r);
        np.push_back(s.piece(k));
    }
    nb.push_back(s.end_time() - r);
    return Hamiltonian(std::move(nb), std::move(np), s.tail());
}

// xi(t) = integral over [0,t] of sqrt(det H), exact per piece.
inline double xi(const Hamiltonian& h, double t) {
    if (t < 0.0) throw std::domain_error("xi: negative time");
    double acc = 0.0;
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        const double a = h.breakpoint(k), b = h.breakpoint(k + 1);
        if (t <= a) return acc;
        acc += std::sqrt(h.piece(k).det()) * (std::min(t, b) - a);
    }
    if (t > h.end_time()) acc += std::sqrt(h.tail().det()) * (t - h.end_time());
    return acc;
}

// eta_n = min{ t : xi(t) = n } for n = 0..n_max. Needs sqrt(det H) to be
// non-integrable, i.e. det(tail) > 0 on this class.
inline std::vector<double> eta_grid(const Hamiltonian& h, std::size_t n_max) {
    if (!(h.tail().det() > 0.0))
        throw hypothesis_error(
            "eta_grid: sqrt(det H) is integrable on [0,inf); the arclength grid "
            "requires a non-integrable sqrt(det H)");
    std::vector<double> eta;
    eta.reserve(n_max + 1);
    eta.push_back(0.0);
    double acc = 0.0;
    std::size_t n = 1;
    for (std::size_t k = 0; k <= h.piece_count() && n <= n_max; ++k) {
        const bool is_tail = k == h.piece_count();
        const SymMatrix2& p = is_tail ? h.tail() : h.piece(k);
        const double a = h.breakpoint(k);
        const double len =
            is_tail ? std::numeric_limits<double>::infinity() : h.breakpoint(k + 1) - a;
        const double rate = std::sqrt(p.det());
        if (rate == 0.0) continue;
        while (n <= n_max && static_cast<double>(n) <= acc + rate * len) {
            eta.push_back(a + (static_cast<double>(n) - acc) / rate);
            ++n;
        }
        if (!is_tail) acc += rate * len;
    }
    return eta;
}

namespace detail {

inline double integrate_entry(const Hamiltonian& h, double a, double b, bool first) {
    double acc = 0.0;
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        const double lo = std::max(a, h.breakpoint(k));
        const double hi = std::min(b, h.breakpoint(k + 1));
        if (hi > lo) acc += (first ? h.piece(k).h11 : h.piece(k).h22) * (hi - lo);
    }
    const double lo = std::max(a, h.end_time());
    if (b > lo) acc += (first ? h.tail().h11 : h.tail().h22) * (b - lo);
    return acc;
}

} // namespace detail

inline double integrate_h1(const Hamiltonian& h, double a, double b) {
    return detail::integrate_entry(h, a, b, true);
}
inline double integrate_h2(const Hamiltonian& h, double a, double b) {
    return detail::integrate_entry(h, a, b, false);
}

// Sum over [eta_n, eta_{n+2}] windows of (int h1)(int h2) - 4; terms with
// eta_n inside the constant tail vanish identically and are not emitted.
struct SzegoCharacteristic {
    std::vector<double> terms;
    double total = 0.0;
};

inline SzegoCharacteristic szego_characteristic(const Hamiltonian& h) {
    if (!h.diagonal())
        throw std::invalid_argument("szego_characteristic: requires a diagonal Hamiltonian");
    SzegoCharacteristic out;
    const double t_tail = h.end_time();
    const std::size_t n_need = static_cast<std::size_t>(std::floor(xi(h, t_tail))) + 3;
    const std::vector<double> eta = eta_grid(h, n_need);
    for (std::size_t n = 0; eta[n] < t_tail; ++n) {
        const double i1 = integrate_h1(h, eta[n], eta[n + 2]);
        const double i2 = integrate_h2(h, eta[n], eta[n + 2]);
        out.terms.push_back(i1 * i2 - 4.0);
    }
    for (double term : out.terms) out.total += term;
    return out;
}

// Bernstein–Szego truncation: copies H on [0,r), then the constant matrix
// diag(1/I_r, I_r). I_r is supplied by the caller (the Weyl module computes it).
inline Hamiltonian bernstein_szego(const Hamiltonian& h, double r, double i_r) {
    if (!(i_r > 0.0) || !std::isfinite(i_r))
        throw std::invalid_argument(
            "bernstein_szego: I_r must be positive and finite (shifted Hamiltonian trivial?)");
    if (r < 0.0) throw std::domain_error("bernstein_szego: negative cut");
    const Hamiltonian s = h.with_breakpoint(r);
    std::vector<double> nb;
    std::vector<SymMatrix2> np;
    for (std::size_t k = 0; k < s.piece_count() && s.breakpoint(k) < r; ++k) {
        nb.push_back(s.breakpoint(k));
        np.push_back(s.piece(k));
    }
    nb.push_back(r);
    return Hamiltonian(std::move(nb), std::move(np), diag_matrix(1.0 / i_r, i_r));
}

// Piecewise-linear clock mapping the reparametrized time back to the original.
struct TimeChange {
    std::vector<double> breaks; // new-clock breakpoints
    std::vector<double> slopes; // d(old)/d(new) per piece
    double tail_slope = 1.0;

    double old_time(double t) const {
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
            if (t <= breaks[k + 1]) return acc + slopes[k] * (t - breaks[k]);
            acc += slopes[k] * (breaks[k + 1] - breaks[k]);
        }
        return acc + tail_slope * (t - breaks.back());
    }
};

struct Reparametrized {
    Hamiltonian hamiltonian;
    TimeChange change;
};

namespace detail {

inline Reparametrized scale_reparametrize(const Hamiltonian& h, double eps, bool by_det) {
    std::vector<double> nb{0.0};
    std::vector<SymMatrix2> np;
    TimeChange change;
    change.breaks.push_back(0.0);
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        SymMatrix2 p = h.piece(k);
        p.h11 += eps;
        p.h22 += eps;
        const double rate = by_det ? std::sqrt(p.det()) : p.trace();
        if (!(rate > 0.0))
            throw std::invalid_argument(
                by_det ? "det_one_reparametrize: piece determinant vanishes; use eps > 0"
                       : "unit_trace_reparametrize: piece trace vanishes");
        const double len = h.breakpoint(k + 1) - h.breakpoint(k);
        SymMatrix2 q = p.scaled(1.0 / rate);
        if (!by_det && q.h12 == 0.0) q.h22 = 1.0 - q.h11; // exact unit trace
        np.push_back(q);
        nb.push_back(nb.back() + rate * len);
        change.breaks.push_back(nb.back());
        change.slopes.push_back(1.0 / rate);
    }
    const double tail_rate = by_det ? std::sqrt(h.tail().det()) : h.tail().trace();
    if (!(tail_rate > 0.0))
        throw std::invalid_argument(by_det ? "det_one_reparametrize: tail determinant vanishes"
                                           : "unit_trace_reparametrize: tail trace vanishes");
    SymMatrix2 tail = h.tail().scaled(1.0 / tail_rate);
    if (!by_det && tail.h12 == 0.0) tail.h22 = 1.0 - tail.h11;
    change.tail_slope = 1.0 / tail_rate;
    return {Hamiltonian(std::move(nb), std::move(np), tail), std::move(change)};
}

} // namespace detail

// Equivalent Hamiltonian with det == 1 everywhere. The perturbation eps*Id is
// applied on the bounded pieces only; eps must be positive if any piece is
// rank-deficient. The tail must already have positive determinant.
inline Reparametrized det_one_reparametrize(const Hamiltonian& h, double eps) {
    if (eps < 0.0) throw std::domain_error("det_one_reparametrize: eps < 0");
    if (eps == 0.0)
        for (std::size_t k = 0; k < h.piece_count(); ++k)
            if (!(h.piece(k).det() > 0.0))
                throw std::invalid_argument(
                    "det_one_reparametrize: piece determinant vanishes; use eps > 0");
    return detail::scale_reparametrize(h, eps, true);
}

// Equivalent Hamiltonian with trace == 1 everywhere (the string module's
// normalization). Diagonal pieces get an exact complement h2 = 1 - h1.
inline Reparametrized unit_trace_reparametrize(const Hamiltonian& h) {
    return detail::scale_reparametrize(h, 0.0, false);
}

} // namespace canon
