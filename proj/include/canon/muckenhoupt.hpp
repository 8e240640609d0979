// muckenhoupt.hpp — summed fixed-scale A2 characteristics of piecewise-constant
// weights: [h, alpha], [h]_{2,l1}, the exponential-kernel characteristic
// [h]_int, the window sequences Q_n / f_n / v_n with the renormalized-weight
// L1 identity, and the [3,4]-window minimizer inequality witness.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "canon/hamiltonian.hpp"

namespace canon {

// Piecewise-constant positive weight on [0, inf) with a constant tail.
// values[k] rules [breaks[k], breaks[k+1]); tail rules [last break, inf).
class WeightFunction {
public:
    WeightFunction(std::vector<double> breakpoints, std::vector<double> values,
                   double tail)
        : breaks_(std::move(breakpoints)), values_(std::move(values)), tail_(tail) {
        if (breaks_.empty() || breaks_.front() != 0.0)
            throw std::invalid_argument("WeightFunction: breakpoints must start at 0");
        if (values_.size() + 1 != breaks_.size())
            throw std::invalid_argument("WeightFunction: need one value per interval");
        for (std::size_t k = 0; k + 1 < breaks_.size(); ++k)
            if (!(breaks_[k] < breaks_[k + 1]))
                throw std::invalid_argument(
                    "WeightFunction: breakpoints must be strictly increasing");
        for (std::size_t k = 0; k < values_.size(); ++k)
            if (!(values_[k] > 0.0))
                throw std::invalid_argument("WeightFunction: value " + std::to_string(k) +
                                            " must be positive");
        if (!(tail_ > 0.0))
            throw std::invalid_argument("WeightFunction: tail value must be positive");
    }

    static WeightFunction constant(double v) { return WeightFunction({0.0}, {}, v); }

    std::size_t piece_count() const { return values_.size(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    double value(std::size_t k) const { return values_[k]; }
    double tail() const { return tail_; }
    double end_time() const { return breaks_.back(); }

    double at(double x) const {
        if (x < 0.0) throw std::domain_error("WeightFunction: negative argument");
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
        return i < values_.size() ? values_[i] : tail_;
    }

    // Exact average of h (or 1/h) over [a, b] by breakpoint splitting.
    double average(double a, double b, bool reciprocal = false) const {
        if (!(b > a)) throw std::domain_error("WeightFunction: empty interval");
        double acc = 0.0;
        for (std::size_t k = 0; k < values_.size(); ++k) {
            const double lo = std::max(a, breaks_[k]);
            const double hi = std::min(b, breaks_[k + 1]);
            if (hi > lo) acc += (reciprocal ? 1.0 / values_[k] : values_[k]) * (hi - lo);
        }
        const double lo = std::max(a, breaks_.back());
        if (b > lo) acc += (reciprocal ? 1.0 / tail_ : tail_) * (b - lo);
        return acc / (b - a);
    }

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
    double tail_;
};

// h1 of a diagonal det-1 Hamiltonian diag(h, 1/h) as a weight.
inline WeightFunction weight_from_hamiltonian(const Hamiltonian& h, double det_tol = 1e-12) {
    if (!h.diagonal())
        throw std::invalid_argument("weight_from_hamiltonian: Hamiltonian must be diagonal");
    std::vector<double> values;
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        if (std::abs(h.piece(k).det() - 1.0) > det_tol)
            throw std::invalid_argument(
                "weight_from_hamiltonian: piece " + std::to_string(k) +
                " does not have unit determinant");
        values.push_back(h.piece(k).h11);
    }
    if (std::abs(h.tail().det() - 1.0) > det_tol)
        throw std::invalid_argument("weight_from_hamiltonian: tail determinant is not 1");
    return WeightFunction(h.breakpoints(), std::move(values), h.tail().h11);
}

// [h, alpha] = sum over n of (<h>_{I_n} <1/h>_{I_n} - 1) with I_n = [n, n+alpha_n).
// Terms with I_n inside the constant tail vanish identically and are skipped.
inline double bracket(const WeightFunction& h, const std::function<double(std::size_t)>& alpha) {
    const std::size_t stop = static_cast<std::size_t>(std::ceil(h.end_time()));
    double acc = 0.0;
    for (std::size_t n = 0; n < stop; ++n) {
        const double a_n = alpha(n);
        if (!(a_n > 0.0)) throw std::invalid_argument("bracket: alpha must be positive");
        const double a = static_cast<double>(n);
        acc += h.average(a, a + a_n) * h.average(a, a + a_n, true) - 1.0;
    }
    return acc;
}

// [h]_{2,l1}: the bracket with the constant window sequence 2, 2, ...
inline double a2_ell1(const WeightFunction& h) {
    return bracket(h, [](std::size_t) { return 2.0; });
}

namespace detail {

// Backward closed forms A(t_k) = int_{t_k}^inf h(s) e^{t_k - s} ds and the
// analogous B with 1/h; within piece k,
//   A(r) = h_k + e^{r - t_{k+1}} (A_{k+1} - h_k).
struct ExpKernelTables {
    std::vector<double> a_at_break; // size piece_count()+1, last entry = tail values
    std::vector<double> b_at_break;
};

inline ExpKernelTables exp_kernel_tables(const WeightFunction& h) {
    const std::size_t n = h.piece_count();
    ExpKernelTables t;
    t.a_at_break.assign(n + 1, h.tail());
    t.b_at_break.assign(n + 1, 1.0 / h.tail());
    for (std::size_t k = n; k-- > 0;) {
        const double decay = std::exp(h.breakpoints()[k] - h.breakpoints()[k + 1]);
        t.a_at_break[k] = h.value(k) + decay * (t.a_at_break[k + 1] - h.value(k));
        t.b_at_break[k] =
            1.0 / h.value(k) + decay * (t.b_at_break[k + 1] - 1.0 / h.value(k));
    }
    return t;
}

} // namespace detail

// kappa(r) = (1/h(r)) int_r^inf h(s) e^{r-s} ds, exact piecewise-exponential.
inline double kappa(const WeightFunction& h, double r) {
    const auto t = detail::exp_kernel_tables(h);
    const auto& breaks = h.breakpoints();
    if (r >= h.end_time()) return 1.0;
    auto it = std::upper_bound(breaks.begin(), breaks.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - breaks.begin()) - 1;
    const double a_r =
        h.value(k) + std::exp(r - breaks[k + 1]) * (t.a_at_break[k + 1] - h.value(k));
    return a_r / h.value(k);
}

inline double kappa_dual(const WeightFunction& h, double r) {
    const auto t = detail::exp_kernel_tables(h);
    const auto& breaks = h.breakpoints();
    if (r >= h.end_time()) return 1.0;
    auto it = std::upper_bound(breaks.begin(), breaks.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - breaks.begin()) - 1;
    const double b_r = 1.0 / h.value(k) +
                       std::exp(r - breaks[k + 1]) * (t.b_at_break[k + 1] - 1.0 / h.value(k));
    return h.value(k) * b_r;
}

// [h]_int = int_0^inf (kappa + kappa_dual - 2) dr. On piece k the integrand is
// e^{r - t_{k+1}} * C_k with C_k = A_{k+1}/h_k + h_k B_{k+1} - 2, so the outer
// integral is the exact sum of C_k (1 - e^{-len_k}); the tail contributes 0.
inline double int_characteristic(const WeightFunction& h) {
    const auto t = detail::exp_kernel_tables(h);
    double acc = 0.0;
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        const double c_k =
            t.a_at_break[k + 1] / h.value(k) + h.value(k) * t.b_at_break[k + 1] - 2.0;
        const double len = h.breakpoints()[k + 1] - h.breakpoints()[k];
        acc += c_k * (1.0 - std::exp(-len));
    }
    return acc;
}

// Window sequences over the integer grid and the renormalized-weight identity:
// with f_n = <h>_{[n,n+1)} and h~ = h/f_n on [n, n+1),
//   sum_n || h~ + 1/h~ - 2 ||_{L1([n,n+1))} = sum_n (<h>_{[n,n+1)}<1/h>_{[n,n+1)} - 1)
// holds exactly; both sides and their difference are reported.
struct MuckenhouptSequences {
    std::vector<double> q;        // Q_n over [n, n+2) windows
    std::vector<double> f;        // f_n = <h>_{[n,n+1)}
    std::vector<double> v;        // v_0 = 0, v_n = log(f_n / f_{n-1})
    double identity_lhs = 0.0;
    double identity_rhs = 0.0;
    double identity_residual = 0.0;
};

inline MuckenhouptSequences sequences_and_identity(const WeightFunction& h) {
    const std::size_t stop = static_cast<std::size_t>(std::ceil(h.end_time()));
    MuckenhouptSequences out;
    for (std::size_t n = 0; n < stop + 1; ++n) {
        const double a = static_cast<double>(n);
        out.f.push_back(h.average(a, a + 1.0));
        out.q.push_back(h.average(a, a + 2.0) * h.average(a, a + 2.0, true) - 1.0);
    }
    out.v.push_back(0.0);
    for (std::size_t n = 1; n < out.f.size(); ++n)
        out.v.push_back(std::log(out.f[n] / out.f[n - 1]));

    // Exact piecewise integrals of h~ + 1/h~ - 2 over each unit interval.
    for (std::size_t n = 0; n < stop; ++n) {
        const double a = static_cast<double>(n);
        const double f_n = out.f[n];
        // L1 norm on [n, n+1): split at the weight's breakpoints.
        double lhs = 0.0;
        std::vector<double> cuts{a, a + 1.0};
        for (double b : h.breakpoints())
            if (b > a && b < a + 1.0) cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
            const double ht = h.at(mid) / f_n;
            lhs += (ht + 1.0 / ht - 2.0) * (cuts[j + 1] - cuts[j]);
        }
        const double rhs = h.average(a, a + 1.0) * h.average(a, a + 1.0, true) - 1.0;
        out.identity_lhs += lhs;
        out.identity_rhs += rhs;
    }
    out.identity_residual = std::abs(out.identity_lhs - out.identity_rhs);
    return out;
}

// For each 4n-based window, the [3,4]-grid minimizer t_n of
// a_n(t) = <h>_{[4n,4n+t]} <1/h>_{[4n,4n+t]} and the summed defect, checked
// against the entropy bound e^{10 K} - 1. K is supplied by the caller.
struct P1Witness {
    std::vector<double> t_points;
    double sum = 0.0;
    double bound = 0.0;
    bool holds = false;
};

inline P1Witness p1_witness(const WeightFunction& h, double entropy_k,
                            std::size_t grid_points = 64) {
    if (grid_points < 2) throw std::invalid_argument("p1_witness: need at least 2 grid points");
    P1Witness out;
    const std::size_t stop =
        static_cast<std::size_t>(std::ceil(h.end_time() / 4.0));
    for (std::size_t n = 0; n < stop; ++n) {
        const double base = 4.0 * static_cast<double>(n);
        double best_t = 3.0;
        double best_a = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < grid_points; ++j) {
            const double t =
                3.0 + static_cast<double>(j) / static_cast<double>(grid_points - 1);
            const double a = h.average(base, base + t) * h.average(base, base + t, true);
            if (a < best_a) {
                best_a = a;
                best_t = t;
            }
        }
        out.t_points.push_back(best_t);
        out.sum += best_a - 1.0;
    }
    out.bound = std::expm1(10.0 * entropy_k);
    out.holds = out.sum <= out.bound + 1e-12;
    return out;
}

} // namespace canon
