#pragma once

// Multivariate Mittag-Leffler function by Laplace inversion.
//
// With c_i = -z_i >= 0 and D(s) = 1 + sum_i c_i s^{-b_i},
//   E_{(b),l}(z) = 1/(2 pi i) int_Br e^s s^{-l} / D(s) ds.
// The Bromwich line is folded onto a keyhole around the branch cut: a circle
// of radius r0 plus both banks of the negative real axis. Zeros of D on the
// principal sheet outside the circle contribute residues. They exist only when
// some b_i > 1, are found by Newton iteration and their number is confirmed
// with the argument principle.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fracspec/errors.hpp"

namespace fracspec::detail {

using cplx = std::complex<double>;

struct ResolventTerms {
    std::vector<double> b;  // orders with a nonzero coefficient
    std::vector<double> c;  // c_i = -z_i > 0
    double lambda = 1.0;

    // sum_i c_i s^{-b_i} for s = r e^{i theta}, |theta| <= pi.
    cplx weight_sum(double r, double theta) const {
        cplx acc = 0.0;
        const double lr = std::log(r);
        for (std::size_t i = 0; i < b.size(); ++i) {
            acc += c[i] * std::exp(cplx(-b[i] * lr, -b[i] * theta));
        }
        return acc;
    }
    cplx denom(double r, double theta) const { return 1.0 + weight_sum(r, theta); }

    // s^{-lambda} / D(s)
    cplx resolvent(double r, double theta) const {
        const cplx num = std::exp(cplx(-lambda * std::log(r), -lambda * theta));
        return num / denom(r, theta);
    }

    cplx denom(cplx s) const { return denom(std::abs(s), std::arg(s)); }
    cplx denom_prime(cplx s) const {
        cplx acc = 0.0;
        const double r = std::abs(s);
        const double th = std::arg(s);
        for (std::size_t i = 0; i < b.size(); ++i) {
            acc -= b[i] * c[i] * std::exp(cplx(-(b[i] + 1.0) * std::log(r), -(b[i] + 1.0) * th));
        }
        return acc;
    }
};

/// Positive root s* of sum_i c_i s^{-b_i} = 1. Every zero of D on the
/// principal sheet satisfies |s| <= s*, and the series of absolute values
/// grows like e^{s*}.
inline double dominant_scale(const std::vector<double>& b, const std::vector<double>& c) {
    auto f = [&](double ls) {
        double acc = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) acc += c[i] * std::exp(-b[i] * ls);
        return acc - 1.0;
    };
    double lo = -50.0;
    double hi = 50.0;
    while (f(lo) < 0.0 && lo > -700.0) lo *= 2.0;
    while (f(hi) > 0.0 && hi < 1e6) hi *= 2.0;
    if (f(lo) < 0.0) return 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

// Number of zeros of D in {eps < |s| < big, 0 < arg s < pi}. D is real and
// positive on the positive real axis, so the boundary phase change is
// accumulated along the outer arc, the upper bank of the cut and the inner arc.
inline int count_zeros_upper(const ResolventTerms& t, double eps, double big) {
    double total = 0.0;
    auto track = [&](auto&& point, double a, double b) {
        // point(u) -> D; u from a to b, adaptive refinement on large jumps
        struct Seg {
            double u0, u1;
            cplx d0, d1;
            int depth;
        };
        const int n0 = 256;
        std::vector<Seg> stack;
        cplx prev = point(a);
        for (int k = 1; k <= n0; ++k) {
            const double u1 = a + (b - a) * k / n0;
            const double u0 = a + (b - a) * (k - 1) / n0;
            const cplx cur = point(u1);
            stack.push_back({u0, u1, prev, cur, 0});
            while (!stack.empty()) {
                Seg s = stack.back();
                stack.pop_back();
                const double jump = std::arg(s.d1 / s.d0);
                if (std::abs(jump) > 0.3 && s.depth < 40) {
                    const double um = 0.5 * (s.u0 + s.u1);
                    const cplx dm = point(um);
                    // push right first so the left half is processed first
                    stack.push_back({um, s.u1, dm, s.d1, s.depth + 1});
                    stack.push_back({s.u0, um, s.d0, dm, s.depth + 1});
                } else {
                    total += jump;
                }
            }
            prev = cur;
        }
    };
    const double pi = std::numbers::pi;
    track([&](double th) { return t.denom(big, th); }, 0.0, pi);
    const double lb = std::log(big);
    const double le = std::log(eps);
    track([&](double u) { return t.denom(std::exp(u), pi); }, lb, le);
    track([&](double th) { return t.denom(eps, th); }, pi, 0.0);
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

inline bool newton_zero(const ResolventTerms& t, cplx s, cplx& out) {
    const double pi = std::numbers::pi;
    for (int it = 0; it < 100; ++it) {
        const cplx d = t.denom(s);
        const cplx dp = t.denom_prime(s);
        if (dp == 0.0) return false;
        cplx step = d / dp;
        // damp steps that would leave the sheet or jump too far
        const double lim = 0.5 * std::abs(s);
        if (std::abs(step) > lim) step *= lim / std::abs(step);
        cplx next = s - step;
        if (next.imag() <= 0.0) next = cplx(next.real(), 0.5 * s.imag());
        if (std::abs(std::arg(next)) >= pi) return false;
        s = next;
        if (std::abs(step) <= 1e-15 * std::abs(s)) break;
    }
    const double scale = 1.0 + std::abs(t.weight_sum(std::abs(s), std::arg(s)));
    if (std::abs(t.denom(s)) > 1e-11 * scale || s.imag() <= 0.0) return false;
    out = s;
    return true;
}

// Zeros of D with Im s > 0 on the principal sheet.
inline std::vector<cplx> upper_zeros(const ResolventTerms& t, double s_star) {
    std::vector<cplx> found;
    double bmax = 0.0;
    for (double b : t.b) bmax = std::max(bmax, b);
    if (bmax <= 1.0) return found;  // Im sum c_i s^{-b_i} < 0 for 0 < arg s < pi

    const double pi = std::numbers::pi;
    auto add = [&](cplx z) {
        for (const cplx& f : found) {
            if (std::abs(f - z) <= 1e-8 * std::abs(z)) return;
        }
        found.push_back(z);
    };
    auto try_from = [&](cplx s0) {
        cplx z;
        if (newton_zero(t, s0, z)) add(z);
    };
    for (std::size_t i = 0; i < t.b.size(); ++i) {
        if (t.b[i] <= 1.0) continue;
        const double r = std::pow(t.c[i], 1.0 / t.b[i]);
        try_from(std::polar(r, pi / t.b[i]));
        try_from(std::polar(std::min(r, s_star), std::min(0.999 * pi, pi / t.b[i] * 1.05)));
    }
    try_from(std::polar(s_star, pi / bmax));

    const double eps = 1e-6 * s_star;
    const double big = 4.0 * s_star;
    const int expected = count_zeros_upper(t, eps, big);
    if (static_cast<int>(found.size()) != expected) {
        for (int ir = 0; ir < 24 && static_cast<int>(found.size()) < expected; ++ir) {
            const double r = s_star * std::pow(10.0, -4.0 + 4.0 * ir / 23.0);
            for (int ia = 0; ia < 16; ++ia) {
                const double th = pi / bmax + (pi - pi / bmax) * (ia + 0.5) / 16.0;
                try_from(std::polar(r, th));
            }
        }
    }
    if (static_cast<int>(found.size()) != expected) {
        throw NonConvergenceError("multivariate contour: located " +
                                  std::to_string(found.size()) + " of " +
                                  std::to_string(expected) + " resolvent poles");
    }
    return found;
}

struct ContourResult {
    double value;
    double est_abs_error;
    std::size_t evaluations;
};

inline ContourResult ml_multivariate_contour(const std::vector<double>& betas, double lambda,
                                             const std::vector<double>& zs) {
    ResolventTerms t;
    t.lambda = lambda;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (zs[i] != 0.0) {
            t.b.push_back(betas[i]);
            t.c.push_back(-zs[i]);
        }
    }
    const double pi = std::numbers::pi;
    const double s_star = dominant_scale(t.b, t.c);
    const std::vector<cplx> poles = upper_zeros(t, s_star);

    // Circle radius: order one, kept away from every pole.
    double r0 = 1.0;
    for (double cand : {1.0, 0.6, 1.6, 0.35, 2.5, 0.2, 4.0}) {
        bool ok = true;
        for (const cplx& p : poles) {
            if (std::abs(std::abs(p) - cand) < 0.2 * cand) ok = false;
        }
        if (ok) {
            r0 = cand;
            break;
        }
    }

    std::size_t evals = 0;
    double err_total = 0.0;

    // Circle: (1/pi) int_0^pi Re[e^s R(s) s] dtheta, s = r0 e^{i theta}.
    auto circle = [&](double th) {
        ++evals;
        const cplx s = std::polar(r0, th);
        return std::real(std::exp(s) * t.resolvent(r0, th) * s) / pi;
    };
    double err = 0.0;
    double l1 = 0.0;
    const double circle_val = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        circle, 0.0, pi, 8, 1e-13, &err, &l1);
    err_total += err + 1e-16 * l1;

    // Banks of the cut: -(1/pi) int_{r0}^inf e^{-r} Im R(r e^{i pi}) dr.
    auto bank = [&](double r) {
        ++evals;
        return -std::exp(-r) * std::imag(t.resolvent(r, pi)) / pi;
    };
    std::vector<double> breaks;
    breaks.push_back(r0);
    auto add_break = [&](double x) {
        if (x > r0 * 1.0001 && x < 800.0) breaks.push_back(x);
    };
    for (std::size_t i = 0; i < t.b.size(); ++i) add_break(std::pow(t.c[i], 1.0 / t.b[i]));
    add_break(s_star);
    for (const cplx& p : poles) add_break(std::abs(p));
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double x, double y) { return y <= x * (1.0 + 1e-6); }),
                 breaks.end());

    thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
    thread_local boost::math::quadrature::exp_sinh<double> es(12);
    double bank_val = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        double e = 0.0;
        double l = 0.0;
        // Two-argument form: the distance to the nearest end is passed
        // separately and is not needed here.
        bank_val += ts.integrate([&](double x, double) { return bank(x); }, breaks[k],
                                 breaks[k + 1], 1e-14, &e, &l);
        err_total += e + 1e-16 * l;
    }
    {
        const double a = breaks.back();
        double e = 0.0;
        double l = 0.0;
        bank_val += es.integrate([&](double x) { return bank(x + a); }, 1e-14, &e, &l);
        err_total += e + 1e-16 * l;
    }

    // Residues of e^s s^{-lambda} / D(s) at poles outside the circle, in pairs.
    double residue_val = 0.0;
    for (const cplx& p : poles) {
        if (std::abs(p) <= r0) continue;
        const cplx num = std::exp(p) * std::exp(-lambda * std::log(p));
        const cplx res = num / t.denom_prime(p);
        residue_val += 2.0 * res.real();
        err_total += 1e-14 * std::abs(res);
    }

    const double value = circle_val + bank_val + residue_val;
    if (!std::isfinite(value)) {
        throw NonConvergenceError("multivariate contour integral did not produce a finite value");
    }
    return {value, err_total, std::max<std::size_t>(evals, 1)};
}

}  // namespace fracspec::detail
