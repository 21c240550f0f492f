#pragma once

// Positive operators with explicitly known discrete spectrum on an interval,
// truncated to N modes, with quadrature-based forward and inverse transforms
// in the orthonormal eigenbasis and the associated Sobolev norms.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fracspec/errors.hpp"
#include "fracspec/gamma.hpp"
#include "fracspec/summation.hpp"

namespace fracspec {

enum class OperatorKind { dirichlet, periodic, hermite, involution };

enum class QuadratureRule { simpson, periodic_trapezoid };

/// Quadrature nodes and weights on the operator domain.
struct SpatialGrid {
    std::vector<double> x;
    std::vector<double> weights;
    std::size_t size() const { return x.size(); }
};

struct SpectralCoefficients {
    std::vector<double> values;
    std::string operator_label;
    std::size_t size() const { return values.size(); }
};

struct SobolevIndex {
    double delta = 0.0;
};

inline constexpr std::size_t kDefaultModes = 64;

class SpectralOperator {
public:
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    double eigenvalue(std::size_t mode) const { return eigenvalues_.at(mode); }
    std::size_t size() const { return eigenvalues_.size(); }
    const std::string& label() const { return label_; }
    bool zero_in_spectrum() const { return zero_in_spectrum_; }
    OperatorKind kind() const { return kind_; }
    double domain_begin() const { return a_; }
    double domain_end() const { return b_; }
    double epsilon() const { return epsilon_; }
    QuadratureRule rule() const {
        return kind_ == OperatorKind::periodic ? QuadratureRule::periodic_trapezoid
                                               : QuadratureRule::simpson;
    }

    /// Value of the orthonormal eigenfunction of the given mode at x.
    double eigenfunction(std::size_t mode, double x) const {
        if (mode >= size()) throw ParameterError("mode index out of range", "mode");
        if (kind_ == OperatorKind::hermite) {
            std::vector<double> all(mode + 1);
            hermite_functions(x, all);
            return all[mode];
        }
        return trig_mode(mode, x);
    }

    /// All N eigenfunctions at x.
    void modes_at(double x, std::span<double> out) const {
        if (out.size() != size()) throw GridMismatchError("output span must hold every mode", "out");
        if (kind_ == OperatorKind::hermite) {
            hermite_functions(x, out);
            return;
        }
        for (std::size_t m = 0; m < size(); ++m) out[m] = trig_mode(m, x);
    }

    /// Quadrature grid with at least `points` nodes (Simpson needs an odd count).
    SpatialGrid grid(std::size_t points) const {
        SpatialGrid g;
        if (rule() == QuadratureRule::periodic_trapezoid) {
            if (points < 3) throw InsufficientSamplesError("grid needs at least 3 points", "points");
            const double h = (b_ - a_) / static_cast<double>(points);
            g.x.resize(points);
            g.weights.assign(points, h);
            for (std::size_t i = 0; i < points; ++i) g.x[i] = a_ + h * static_cast<double>(i);
            return g;
        }
        if (points < 3) throw InsufficientSamplesError("grid needs at least 3 points", "points");
        if (points % 2 == 0) ++points;
        const std::size_t intervals = points - 1;
        const double h = (b_ - a_) / static_cast<double>(intervals);
        g.x.resize(points);
        g.weights.resize(points);
        for (std::size_t i = 0; i < points; ++i) {
            g.x[i] = i == intervals ? b_ : a_ + h * static_cast<double>(i);
            const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            g.weights[i] = c * h / 3.0;
        }
        return g;
    }

    /// Grid with 16 points per wavelength of the fastest retained mode.
    SpatialGrid default_grid() const { return grid(default_points()); }

    std::size_t default_points() const {
        const double n = static_cast<double>(size());
        double wavelengths = 0.0;
        switch (kind_) {
            case OperatorKind::dirichlet:
            case OperatorKind::involution: wavelengths = 0.5 * n; break;
            case OperatorKind::periodic: wavelengths = std::floor(0.5 * n); break;
            case OperatorKind::hermite:
                // local wavenumber sqrt(2N+1) across a box of width 2X
                wavelengths = std::sqrt(2.0 * n + 1.0) * (b_ - a_) / (2.0 * std::numbers::pi);
                break;
        }
        const auto pts = static_cast<std::size_t>(std::ceil(16.0 * std::max(wavelengths, 1.0)));
        return std::max<std::size_t>(pts, 128) + 1;
    }

    friend SpectralOperator dirichlet_laplacian(double, std::size_t);
    friend SpectralOperator periodic_laplacian(std::size_t);
    friend SpectralOperator harmonic_oscillator(std::size_t, double);
    friend SpectralOperator involution_operator(double, std::size_t);

private:
    SpectralOperator() = default;

    double trig_mode(std::size_t mode, double x) const {
        const double pi = std::numbers::pi;
        switch (kind_) {
            case OperatorKind::dirichlet:
            case OperatorKind::involution: {
                const double k = static_cast<double>(wavenumber_[mode]);
                return std::sqrt(2.0 / (b_ - a_)) * std::sin(k * pi * (x - a_) / (b_ - a_));
            }
            case OperatorKind::periodic: {
                if (mode == 0) return 1.0 / std::sqrt(2.0 * pi);
                const double k = static_cast<double>((mode + 1) / 2);
                return (mode % 2 == 1 ? std::cos(k * x) : std::sin(k * x)) / std::sqrt(pi);
            }
            case OperatorKind::hermite: break;
        }
        return 0.0;
    }

    void hermite_functions(double x, std::span<double> out) const {
        if (out.empty()) return;
        out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
        if (out.size() > 1) out[1] = std::sqrt(2.0) * x * out[0];
        for (std::size_t k = 1; k + 1 < out.size(); ++k) {
            const double kk = static_cast<double>(k);
            out[k + 1] = x * std::sqrt(2.0 / (kk + 1.0)) * out[k] - std::sqrt(kk / (kk + 1.0)) * out[k - 1];
        }
    }

    OperatorKind kind_ = OperatorKind::dirichlet;
    std::vector<double> eigenvalues_;
    std::vector<int> wavenumber_;  // sine index k per mode (dirichlet, involution)
    double a_ = 0.0;
    double b_ = 1.0;
    double epsilon_ = 0.0;
    std::string label_;
    bool zero_in_spectrum_ = false;
};

namespace detail {

inline void check_modes(std::size_t n) {
    if (n < 1) throw ParameterError("at least one mode is required", "N");
}

}  // namespace detail

/// -d^2/dx^2 on (0, L) with Dirichlet conditions.
inline SpectralOperator dirichlet_laplacian(double length, std::size_t n = kDefaultModes) {
    detail::check_modes(n);
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ParameterError("interval length must be > 0", "L");
    }
    SpectralOperator op;
    op.kind_ = OperatorKind::dirichlet;
    op.a_ = 0.0;
    op.b_ = length;
    op.label_ = "dirichlet(L=" + detail::fmt_arg(length) + ",N=" + std::to_string(n) + ")";
    for (std::size_t k = 1; k <= n; ++k) {
        const double w = static_cast<double>(k) * std::numbers::pi / length;
        op.eigenvalues_.push_back(w * w);
        op.wavenumber_.push_back(static_cast<int>(k));
    }
    return op;
}

/// -d^2/dx^2 on [0, 2 pi] with periodic conditions; cos before sin in each pair.
inline SpectralOperator periodic_laplacian(std::size_t n = kDefaultModes) {
    detail::check_modes(n);
    SpectralOperator op;
    op.kind_ = OperatorKind::periodic;
    op.a_ = 0.0;
    op.b_ = 2.0 * std::numbers::pi;
    op.label_ = "periodic(N=" + std::to_string(n) + ")";
    op.zero_in_spectrum_ = true;
    for (std::size_t m = 0; m < n; ++m) {
        const double k = static_cast<double>((m + 1) / 2);
        op.eigenvalues_.push_back(k * k);
    }
    return op;
}

/// -d^2/dx^2 + x^2 on the line, truncated to the box [-X, X].
/// A non-positive box_half_width selects X = 2 sqrt(2N+1).
inline SpectralOperator harmonic_oscillator(std::size_t n = kDefaultModes, double box_half_width = 0.0) {
    detail::check_modes(n);
    if (!std::isfinite(box_half_width)) throw ParameterError("box half-width must be finite", "X");
    const double X = box_half_width > 0.0 ? box_half_width : 2.0 * std::sqrt(2.0 * static_cast<double>(n) + 1.0);
    SpectralOperator op;
    op.kind_ = OperatorKind::hermite;
    op.a_ = -X;
    op.b_ = X;
    op.label_ = "hermite(N=" + std::to_string(n) + ")";
    for (std::size_t k = 0; k < n; ++k) op.eigenvalues_.push_back(2.0 * static_cast<double>(k) + 1.0);
    return op;
}

/// v -> -(v''(x) - eps v''(pi - x)) on (0, pi) with Dirichlet conditions.
/// Modes k = 1..N are ordered by eigenvalue k^2 (1 + (-1)^k eps).
inline SpectralOperator involution_operator(double epsilon, std::size_t n = kDefaultModes) {
    detail::check_modes(n);
    if (!(std::abs(epsilon) < 1.0)) {
        throw ParameterError("involution coefficient must satisfy |epsilon| < 1, got " +
                                 detail::fmt_arg(epsilon),
                             "epsilon");
    }
    SpectralOperator op;
    op.kind_ = OperatorKind::involution;
    op.a_ = 0.0;
    op.b_ = std::numbers::pi;
    op.epsilon_ = epsilon;
    op.label_ = "involution(eps=" + detail::fmt_arg(epsilon) + ",N=" + std::to_string(n) + ")";
    std::vector<int> k(n);
    std::iota(k.begin(), k.end(), 1);
    auto lambda = [&](int kk) {
        const double sign = kk % 2 == 0 ? 1.0 : -1.0;
        return static_cast<double>(kk) * static_cast<double>(kk) * (1.0 + sign * epsilon);
    };
    std::stable_sort(k.begin(), k.end(), [&](int p, int q) { return lambda(p) < lambda(q); });
    for (int kk : k) {
        op.eigenvalues_.push_back(lambda(kk));
        op.wavenumber_.push_back(kk);
    }
    return op;
}

/// Rows are modes, columns grid points.
inline std::vector<std::vector<double>> basis_matrix(const SpectralOperator& op, const SpatialGrid& g) {
    std::vector<std::vector<double>> B(op.size(), std::vector<double>(g.size()));
    std::vector<double> col(op.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        op.modes_at(g.x[i], col);
        for (std::size_t m = 0; m < op.size(); ++m) B[m][i] = col[m];
    }
    return B;
}

/// Largest entry of |G - I| for the quadrature Gram matrix on g.
inline double gram_defect(const SpectralOperator& op, const SpatialGrid& g) {
    const auto B = basis_matrix(op, g);
    double worst = 0.0;
    for (std::size_t p = 0; p < op.size(); ++p) {
        for (std::size_t q = p; q < op.size(); ++q) {
            CompensatedSum<double> acc;
            for (std::size_t i = 0; i < g.size(); ++i) acc += g.weights[i] * B[p][i] * B[q][i];
            worst = std::max(worst, std::abs(acc.value() - (p == q ? 1.0 : 0.0)));
        }
    }
    return worst;
}

inline constexpr double kGramTolerance = 1e-8;

namespace detail {

inline void check_grid(const SpectralOperator& op, const SpatialGrid& g) {
    if (g.weights.size() != g.x.size()) throw GridMismatchError("grid weights and nodes differ", "grid");
    const double defect = gram_defect(op, g);
    if (!(defect <= kGramTolerance)) {
        throw ResolutionError("Gram matrix of " + op.label() + " deviates from identity by " +
                              fmt_arg(defect) + " on " + std::to_string(g.size()) + " points");
    }
}

inline void check_coefficients(const SpectralOperator& op, const SpectralCoefficients& c) {
    if (c.size() != op.size()) {
        throw GridMismatchError("expected " + std::to_string(op.size()) + " coefficients, got " +
                                    std::to_string(c.size()),
                                "coefficients");
    }
    if (!c.operator_label.empty() && c.operator_label != op.label()) {
        throw GridMismatchError("coefficients belong to " + c.operator_label + ", not " + op.label(),
                                "coefficients");
    }
}

}  // namespace detail

/// Expansion coefficients (f, e_m) by quadrature on g.
inline SpectralCoefficients analyze(const SpectralOperator& op, const SpatialGrid& g,
                                    std::span<const double> f) {
    if (f.size() != g.size()) {
        throw GridMismatchError("expected " + std::to_string(g.size()) + " samples, got " +
                                    std::to_string(f.size()),
                                "samples");
    }
    detail::check_grid(op, g);
    SpectralCoefficients c{std::vector<double>(op.size(), 0.0), op.label()};
    std::vector<CompensatedSum<double>> acc(op.size());
    std::vector<double> col(op.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        op.modes_at(g.x[i], col);
        const double wf = g.weights[i] * f[i];
        for (std::size_t m = 0; m < op.size(); ++m) acc[m] += wf * col[m];
    }
    for (std::size_t m = 0; m < op.size(); ++m) c.values[m] = acc[m].value();
    return c;
}

/// Pointwise sum of c_m e_m(x) at the given points.
inline std::vector<double> synthesize(const SpectralOperator& op, const SpectralCoefficients& c,
                                      std::span<const double> x) {
    detail::check_coefficients(op, c);
    std::vector<double> out(x.size());
    std::vector<double> col(op.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        op.modes_at(x[i], col);
        CompensatedSum<double> acc;
        for (std::size_t m = 0; m < op.size(); ++m) acc += c.values[m] * col[m];
        out[i] = acc.value();
    }
    return out;
}

inline std::vector<double> synthesize(const SpectralOperator& op, const SpectralCoefficients& c,
                                      const SpatialGrid& g) {
    return synthesize(op, c, std::span<const double>(g.x));
}

/// (sum_m (1 + gamma_m)^delta c_m^2)^{1/2}
inline double sobolev_norm(const SpectralOperator& op, const SpectralCoefficients& c, SobolevIndex s) {
    detail::check_coefficients(op, c);
    if (!std::isfinite(s.delta)) throw ParameterError("Sobolev index must be finite", "delta");
    std::vector<double> scaled(c.size());
    for (std::size_t m = 0; m < c.size(); ++m) {
        scaled[m] = std::pow(1.0 + op.eigenvalue(m), 0.5 * s.delta) * c.values[m];
    }
    return scaled_norm2(scaled);
}

/// Quadrature L2 norm of samples on g.
inline double l2_norm(const SpatialGrid& g, std::span<const double> f) {
    if (f.size() != g.size()) throw GridMismatchError("samples and grid differ in length", "samples");
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < g.size(); ++i) acc += g.weights[i] * f[i] * f[i];
    return std::sqrt(std::max(acc.value(), 0.0));
}

/// Quadrature L2 norm of f minus its truncated expansion.
inline double projection_tail(const SpectralOperator& op, const SpatialGrid& g, std::span<const double> f,
                              const SpectralCoefficients& c) {
    auto r = synthesize(op, c, g);
    if (r.size() != f.size()) throw GridMismatchError("samples and grid differ in length", "samples");
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] - r[i];
    return l2_norm(g, r);
}

/// Unit coefficient vector for one mode.
inline SpectralCoefficients unit_coefficients(const SpectralOperator& op, std::size_t mode, double scale = 1.0) {
    if (mode >= op.size()) throw ParameterError("mode index out of range", "mode");
    SpectralCoefficients c{std::vector<double>(op.size(), 0.0), op.label()};
    c.values[mode] = scale;
    return c;
}

}  // namespace fracspec
