#pragma once

// Product-integration discretizations of the Riemann-Liouville integral and
// the Caputo derivative on (possibly graded) time grids, and an implicit time
// stepper for the scalar multi-term relaxation/oscillation equation
//
//   sum_k w_k D^{b_k} u + gamma u = 0,   b_0 > b_1 > ... , w_0 = 1.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracspec/errors.hpp"
#include "fracspec/gamma.hpp"

namespace fracspec {

class TimeGrid {
public:
    /// Nodes t_j = T (j/M)^r, j = 0..M.
    static TimeGrid graded(double T, std::size_t M, double r = 1.0) {
        if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("grid end time must be > 0", "T");
        if (M < 2) throw InsufficientSamplesError("grid needs at least 3 nodes", "M");
        if (!(r >= 1.0) || !std::isfinite(r)) {
            throw ParameterError("grading exponent must be >= 1", "grading_exponent");
        }
        std::vector<double> t(M + 1);
        for (std::size_t j = 0; j <= M; ++j) {
            t[j] = T * std::pow(static_cast<double>(j) / static_cast<double>(M), r);
        }
        t[M] = T;
        return TimeGrid(std::move(t), r);
    }

    static TimeGrid uniform(double T, std::size_t M) { return graded(T, M, 1.0); }

    static TimeGrid from_nodes(std::vector<double> nodes) {
        TimeGrid g(std::move(nodes), 1.0);
        return g;
    }

    const std::vector<double>& nodes() const { return t_; }
    double grading_exponent() const { return r_; }
    std::size_t size() const { return t_.size(); }
    std::size_t steps() const { return t_.size() - 1; }
    double operator[](std::size_t j) const { return t_[j]; }
    double end() const { return t_.back(); }

private:
    TimeGrid(std::vector<double> t, double r) : t_(std::move(t)), r_(r) {
        if (t_.size() < 3) throw InsufficientSamplesError("grid needs at least 3 nodes", "nodes");
        if (t_[0] != 0.0) throw ParameterError("grid must start at t = 0", "nodes");
        for (std::size_t j = 1; j < t_.size(); ++j) {
            if (!(t_[j] > t_[j - 1]) || !std::isfinite(t_[j])) {
                throw ParameterError("grid nodes must be finite and strictly increasing", "nodes");
            }
        }
    }

    std::vector<double> t_;
    double r_;
};

/// Grading exponent that restores the nominal order for t^beta-type solutions.
inline double default_grading(double beta) {
    return std::max(1.0, 2.0 / beta);
}

struct ScalarFODE {
    std::vector<double> orders;   // (beta, beta_1, ..., beta_m), strictly decreasing
    std::vector<double> weights;  // (1, sigma_1, ..., sigma_m)
    double gamma = 0.0;
    double u0 = 0.0;
    std::optional<double> u1;     // required iff beta > 1

    void validate() const {
        if (orders.empty()) throw ParameterError("at least one order is required", "orders");
        if (weights.size() != orders.size()) {
            throw ParameterError("weights and orders differ in length", "weights");
        }
        if (!(orders[0] > 0.0 && orders[0] < 2.0)) {
            throw ParameterError("leading order must lie in (0,2), got " +
                                     detail::fmt_arg(orders[0]),
                                 "orders");
        }
        for (std::size_t i = 1; i < orders.size(); ++i) {
            if (!(orders[i] > 0.0) || !(orders[i] < orders[i - 1])) {
                throw ParameterError("orders must be positive and strictly decreasing", "orders");
            }
        }
        if (weights[0] != 1.0) throw ParameterError("leading weight must be 1", "weights");
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw ParameterError("weights must be finite and >= 0", "weights");
            }
        }
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
            throw ParameterError("eigenvalue must be finite and >= 0", "gamma");
        }
        if (!std::isfinite(u0)) throw ParameterError("u0 must be finite", "u0");
        if (orders[0] > 1.0) {
            if (!u1) throw ParameterError("u1 is required when beta > 1", "u1");
            if (!std::isfinite(*u1)) throw ParameterError("u1 must be finite", "u1");
        } else if (u1) {
            throw ParameterError("u1 must be absent when beta <= 1", "u1");
        }
    }
};

namespace detail {

inline void check_aligned(std::span<const double> f, const TimeGrid& grid) {
    if (f.size() != grid.size()) {
        throw GridMismatchError("expected " + std::to_string(grid.size()) + " samples, got " +
                                    std::to_string(f.size()),
                                "samples");
    }
}

// a^p - (a-h)^p for a >= h > 0. The width h is passed separately because
// on strongly graded grids it is far below the rounding error of a.
inline double pow_diff(double a, double h, double p) {
    if (h >= a) return std::pow(a, p);
    return -std::pow(a, p) * std::expm1(p * std::log1p(-h / a));
}

// L1 weight of interval [t_j, t_j + h] at node t_n, a = t_n - t_j, order b in (0,1):
//   (a^{1-b} - (a-h)^{1-b}) / Gamma(2 - b).
inline double l1_weight(double a, double h, double b, double inv_gamma) {
    return pow_diff(a, h, 1.0 - b) * inv_gamma;
}

// Weight of the curvature part of a quadratic reconstruction on [t_j, t_j + h]
// at node t_n, a = t_n - t_j, order b in (0,1):
//   (1/Gamma(1-b)) int_{a-h}^{a} tau^{-b} (2a - h - 2 tau) dtau.
// The closed form cancels to O(h^3 a^{-b-1}); a series in h/(2a-h) is used
// once the interval is short against its distance from t_n.
inline double l12_weight(double a, double h, double b, double inv_gamma) {
    const double inv_gamma_1mb = (1.0 - b) * inv_gamma;
    const double m = a - 0.5 * h;
    const double x = 0.5 * h / m;
    if (h < a && x < 0.1) {
        // -4 m^{2-b} sum_{k odd} binom(-b, k) x^{k+2} / (k+2)
        double coef = 1.0;
        double xp = x * x;
        double sum = 0.0;
        for (int k = 1; k < 40; ++k) {
            coef *= (-b - (k - 1)) / k;
            xp *= x;
            if (k % 2 == 1) {
                const double term = coef * xp / (k + 2);
                sum += term;
                if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
            }
        }
        return -4.0 * std::pow(m, 2.0 - b) * sum * inv_gamma_1mb;
    }
    const double j = (2.0 * a - h) * pow_diff(a, h, 1.0 - b) / (1.0 - b) - 2.0 * pow_diff(a, h, 2.0 - b) / (2.0 - b);
    return j * inv_gamma_1mb;
}

}  // namespace detail

/// (1/Gamma(beta)) int_0^t (t-s)^{beta-1} f(s) ds at every node, integrating
/// the piecewise-linear interpolant of f exactly.
inline std::vector<double> rl_integral(std::span<const double> f, const TimeGrid& grid,
                                       double beta) {
    detail::check_aligned(f, grid);
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ParameterError("integral order must be > 0", "beta");
    }
    const auto& t = grid.nodes();
    const double inv_gamma = 1.0 / gamma_real(beta);
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t n = 1; n < t.size(); ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = t[n] - t[j];
            const double h = t[j + 1] - t[j];
            const double d1 = detail::pow_diff(a, h, beta);
            const double d2 = detail::pow_diff(a, h, beta + 1.0);
            const double upper = (a * d1 / beta - d2 / (beta + 1.0)) / h;  // weight of f_{j+1}
            const double lower = h * d1 / beta / h - upper;                 // weight of f_j
            acc += lower * f[j] + upper * f[j + 1];
        }
        out[n] = acc * inv_gamma;
    }
    return out;
}

/// Caputo derivative of order 0 < beta <= 1: the L1 product rule for beta < 1,
/// the backward difference quotient for beta = 1. The value at t = 0 is 0.
inline std::vector<double> caputo_l1(std::span<const double> f, const TimeGrid& grid,
                                     double beta) {
    detail::check_aligned(f, grid);
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw ParameterError("L1 rule needs 0 < beta <= 1, got " + detail::fmt_arg(beta), "beta");
    }
    const auto& t = grid.nodes();
    std::vector<double> out(t.size(), 0.0);
    if (beta == 1.0) {
        for (std::size_t n = 1; n < t.size(); ++n) {
            out[n] = (f[n] - f[n - 1]) / (t[n] - t[n - 1]);
        }
        return out;
    }
    const double inv_gamma = 1.0 / gamma_real(2.0 - beta);
    for (std::size_t n = 1; n < t.size(); ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double h = t[j + 1] - t[j];
            acc += (f[j + 1] - f[j]) / h * detail::l1_weight(t[n] - t[j], h, beta, inv_gamma);
        }
        out[n] = acc;
    }
    return out;
}

/// Caputo derivative of order 1 < beta < 2 as I^{2-beta} f''. On each
/// interval f'' is replaced by the mean of the three-point second differences
/// at its end nodes (one-sided at the ends of the grid), i.e. the second
/// derivative of a local quadratic reconstruction; quadratics are exact.
inline std::vector<double> caputo_l2(std::span<const double> f, const TimeGrid& grid,
                                     double beta) {
    detail::check_aligned(f, grid);
    if (!(beta > 1.0 && beta < 2.0)) {
        throw ParameterError("L2 rule needs 1 < beta < 2, got " + detail::fmt_arg(beta), "beta");
    }
    const auto& t = grid.nodes();
    const std::size_t N = t.size();
    // Second divided differences at interior nodes, times 2.
    std::vector<double> d2(N, 0.0);
    for (std::size_t j = 1; j + 1 < N; ++j) {
        const double h0 = t[j] - t[j - 1];
        const double h1 = t[j + 1] - t[j];
        d2[j] = 2.0 * ((f[j + 1] - f[j]) / h1 - (f[j] - f[j - 1]) / h0) / (h0 + h1);
    }
    std::vector<double> fpp(N - 1);
    for (std::size_t j = 0; j + 1 < N; ++j) {
        if (j == 0) {
            fpp[j] = d2[1];
        } else if (j + 2 == N) {
            fpp[j] = d2[j];
        } else {
            fpp[j] = 0.5 * (d2[j] + d2[j + 1]);
        }
    }
    const double p = 2.0 - beta;
    const double inv_gamma = 1.0 / gamma_real(3.0 - beta);
    std::vector<double> out(N, 0.0);
    for (std::size_t n = 1; n < N; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += fpp[j] * detail::pow_diff(t[n] - t[j], t[j + 1] - t[j], p);
        }
        out[n] = acc * inv_gamma;
    }
    return out;
}

/// Implicit product-integration solver for the scalar mode equation.
///
/// Orders below one act on u through the L1 rule; order one uses the
/// variable-step BDF2 formula (backward Euler on the first step).
/// When the leading order exceeds one the velocity v = u' is carried as a
/// second unknown: orders in (1,2) become Caputo derivatives of order b-1 of
/// v, whose history uses the quadratic through three consecutive nodes
/// (L1-2 type rule; linear on the first interval), and u, v
/// are linked by the trapezoidal rule.
inline std::vector<double> solve_scalar_fode(const ScalarFODE& p, const TimeGrid& grid) {
    p.validate();
    if (grid.steps() < 64) {
        throw InsufficientSamplesError("time stepper needs at least 64 steps, got " +
                                           std::to_string(grid.steps()),
                                       "M");
    }
    const auto& t = grid.nodes();
    const std::size_t N = t.size();
    const std::size_t K = p.orders.size();
    const bool velocity = p.orders[0] > 1.0;

    // Active terms only; zero weights drop out exactly.
    struct Term {
        double order;
        double weight;
        double inv_gamma;
        enum Kind { l1_u, backward_u, l1_v, velocity_value } kind;
    };
    std::vector<Term> terms;
    for (std::size_t k = 0; k < K; ++k) {
        const double b = p.orders[k];
        const double w = p.weights[k];
        if (w == 0.0) continue;
        if (b > 1.0) {
            terms.push_back({b - 1.0, w, 1.0 / gamma_real(3.0 - b), Term::l1_v});
        } else if (b == 1.0) {
            terms.push_back({1.0, w, 1.0, velocity ? Term::velocity_value : Term::backward_u});
        } else {
            terms.push_back({b, w, 1.0 / gamma_real(2.0 - b), Term::l1_u});
        }
    }

    std::vector<double> u(N, 0.0);
    std::vector<double> v(velocity ? N : 0, 0.0);
    u[0] = p.u0;
    if (velocity) v[0] = *p.u1;

    // slope of x on interval j
    auto slope = [&](const std::vector<double>& x, std::size_t j) {
        return (x[j + 1] - x[j]) / (t[j + 1] - t[j]);
    };

    for (std::size_t n = 1; n < N; ++n) {
        const double h = t[n] - t[n - 1];
        // Equation: coef_u * u_n + coef_v * v_n + rhs = 0.
        double coef_u = p.gamma;
        double coef_v = 0.0;
        double rhs = 0.0;
        for (const Term& term : terms) {
            switch (term.kind) {
                case Term::backward_u:
                    if (n == 1) {
                        coef_u += term.weight / h;
                        rhs -= term.weight * u[0] / h;
                    } else {
                        // variable-step BDF2, w = h_n / h_{n-1}
                        const double w = h / (t[n - 1] - t[n - 2]);
                        coef_u += term.weight * (1.0 + 2.0 * w) / ((1.0 + w) * h);
                        rhs += term.weight * (-(1.0 + w) * u[n - 1] + w * w / (1.0 + w) * u[n - 2]) / h;
                    }
                    break;
                case Term::velocity_value:
                    coef_v += term.weight;
                    break;
                case Term::l1_u:
                case Term::l1_v: {
                    const bool on_v = term.kind == Term::l1_v;
                    const std::vector<double>& x = on_v ? v : u;
                    double hist = 0.0;
                    for (std::size_t j = 0; j + 1 < n; ++j) {
                        const double a = t[n] - t[j];
                        const double hj = t[j + 1] - t[j];
                        hist += slope(x, j) * detail::l1_weight(a, hj, term.order, term.inv_gamma);
                        if (on_v && j > 0) {
                            // curvature of the quadratic through t_{j-1}, t_j, t_{j+1}
                            const double curv = (slope(x, j) - slope(x, j - 1)) / (t[j + 1] - t[j - 1]);
                            hist += curv * detail::l12_weight(a, hj, term.order, term.inv_gamma);
                        }
                    }
                    // current interval, slope (x_n - x_{n-1}) / h
                    const double w0 = detail::l1_weight(h, h, term.order, term.inv_gamma);
                    double d = w0 / h;
                    hist -= d * x[n - 1];
                    if (on_v && n > 1) {
                        // curvature (slope_n - slope_{n-1}) / (t_n - t_{n-2}) is affine in v_n
                        const double w1 = detail::l12_weight(h, h, term.order, term.inv_gamma);
                        const double span = t[n] - t[n - 2];
                        d += w1 / (h * span);
                        hist -= w1 * (x[n - 1] / h + slope(x, n - 2)) / span;
                    }
                    rhs += term.weight * hist;
                    (on_v ? coef_v : coef_u) += term.weight * d;
                    break;
                }
            }
        }
        if (!velocity) {
            u[n] = -rhs / coef_u;
        } else {
            // u_n = u_{n-1} + h/2 (v_{n-1} + v_n)
            const double base = u[n - 1] + 0.5 * h * v[n - 1];
            const double a = coef_u * 0.5 * h + coef_v;
            v[n] = -(rhs + coef_u * base) / a;
            u[n] = base + 0.5 * h * v[n];
        }
        if (!(std::abs(u[n]) <= 1e12)) {
            throw InstabilityError("time stepper diverged at t = " + detail::fmt_arg(t[n]));
        }
    }
    return u;
}

}  // namespace fracspec
