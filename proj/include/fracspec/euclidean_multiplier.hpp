#pragma once

// Time-fractional heat flow on the line, approximated by a large torus and
// solved with the Fourier multiplier E_alpha(-t^alpha |xi|^{2a}), plus the
// L^p -> L^q decay study built on it.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fracspec/errors.hpp"
#include "fracspec/evolution.hpp"
#include "fracspec/mittag_leffler.hpp"
#include "fracspec/parallel.hpp"
#include "fracspec/summation.hpp"

namespace fracspec {

/// Grid x_i = -X + i dx, i = 0..M-1, on the torus [-X, X).
class PeriodizedLine {
public:
    PeriodizedLine(double half_width, std::size_t points) : X_(half_width), M_(points) {
        if (!(half_width > 0.0) || !std::isfinite(half_width)) {
            throw ParameterError("box half-width X must be > 0", "X");
        }
        if (points < 256 || (points & (points - 1)) != 0) {
            throw ParameterError("grid size M must be a power of two >= 256, got " + std::to_string(points), "M");
        }
    }

    double half_width() const { return X_; }
    std::size_t size() const { return M_; }
    double dx() const { return 2.0 * X_ / static_cast<double>(M_); }
    double x(std::size_t i) const { return -X_ + dx() * static_cast<double>(i); }
    /// Angular frequency of the k-th discrete mode, k = 0..M/2.
    double frequency(std::size_t k) const { return std::numbers::pi * static_cast<double>(k) / X_; }

    std::vector<double> nodes() const {
        std::vector<double> out(M_);
        for (std::size_t i = 0; i < M_; ++i) out[i] = x(i);
        return out;
    }

private:
    double X_;
    std::size_t M_;
};

/// exp(-x^2 / (2 width^2)) on the grid.
inline std::vector<double> gaussian_profile(const PeriodizedLine& line, double width) {
    if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("width must be > 0", "width");
    std::vector<double> u(line.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double s = line.x(i) / width;
        u[i] = std::exp(-0.5 * s * s);
    }
    return u;
}

/// (sum |u_i|^p dx)^{1/p}
inline double lp_norm(std::span<const double> u, double p, double dx) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("p must be >= 1", "p");
    if (!(dx > 0.0)) throw ParameterError("dx must be > 0", "dx");
    double peak = 0.0;
    for (double v : u) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    // scale by the peak so |u|^p cannot underflow for large p
    CompensatedSum<double> acc;
    for (double v : u) acc += std::pow(std::abs(v) / peak, p);
    return peak * std::pow(acc.value() * dx, 1.0 / p);
}

struct LineSolveOptions {
    double power = 1.0;                // multiplier E_alpha(-t^alpha |xi|^{2 power})
    bool require_decay = true;         // enforce |u0| <= 1e-12 max|u0| at the seam x = -X
    double aliasing_tolerance = 1e-10;
    MLOptions ml = propagator_options();
};

namespace detail {

// The FFTW planner is not thread-safe; execution with fresh arrays is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

struct FftwPlanDestroy {
    void operator()(fftw_plan p) const {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
};

using PlanHandle = std::unique_ptr<std::remove_pointer_t<fftw_plan>, FftwPlanDestroy>;

// Real-to-half-complex transform pair of size n with private buffers.
class RealFft {
public:
    explicit RealFft(std::size_t n)
        : real_(fftw_alloc_real(n)),
          spec_(fftw_alloc_complex(n / 2 + 1)) {
        if (!real_ || !spec_) throw std::bad_alloc();
        std::lock_guard lock(fftw_planner_mutex());
        const int ni = static_cast<int>(n);
        forward_.reset(fftw_plan_dft_r2c_1d(ni, real_.get(), spec_.get(), FFTW_ESTIMATE));
        inverse_.reset(fftw_plan_dft_c2r_1d(ni, spec_.get(), real_.get(), FFTW_ESTIMATE));
    }

    double* real() { return real_.get(); }
    fftw_complex* spectrum() { return spec_.get(); }
    void forward() { fftw_execute(forward_.get()); }
    void inverse() { fftw_execute(inverse_.get()); }  // unnormalized; destroys the spectrum

private:
    std::unique_ptr<double, FftwFree> real_;
    std::unique_ptr<fftw_complex, FftwFree> spec_;
    PlanHandle forward_;
    PlanHandle inverse_;
};

inline void check_order(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ParameterError("alpha must lie in (0,1], got " + fmt_arg(alpha), "alpha");
    }
}

inline double seam_value(std::span<const double> u) {
    return std::max({std::abs(u.front()), std::abs(u[1]), std::abs(u.back())});
}

inline double sup_abs(std::span<const double> u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace detail

/// Applies E_alpha(-t^alpha |xi_k|^{2a}) to the discrete Fourier modes of u0.
inline std::vector<double> solve_heat_line(const PeriodizedLine& line, std::span<const double> u0, double alpha,
                                           double t, const LineSolveOptions& o = {}) {
    detail::check_order(alpha);
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("t must be finite and >= 0", "t");
    if (!(o.power > 0.0)) throw ParameterError("multiplier power must be > 0", "power");
    const std::size_t M = line.size();
    if (u0.size() != M) {
        throw GridMismatchError("expected " + std::to_string(M) + " samples, got " + std::to_string(u0.size()),
                                "u0");
    }
    const double peak = detail::sup_abs(u0);
    if (o.require_decay && detail::seam_value(u0) > 1e-12 * peak) {
        throw DomainError("initial data does not decay below 1e-12 of its maximum at x = +-X", "u0");
    }
    if (t == 0.0) return {u0.begin(), u0.end()};

    detail::RealFft fft(M);
    std::copy(u0.begin(), u0.end(), fft.real());
    fft.forward();
    auto* spec = fft.spectrum();
    const std::size_t K = M / 2 + 1;
    double spec_max = 0.0;
    for (std::size_t k = 0; k < K; ++k) spec_max = std::max(spec_max, std::hypot(spec[k][0], spec[k][1]));

    const double ta = std::pow(t, alpha);
    for (std::size_t k = 0; k < K; ++k) {
        const double mag = std::hypot(spec[k][0], spec[k][1]);
        // |multiplier| <= 1, so modes this small stay below rounding of the result
        if (mag <= 1e-18 * spec_max) {
            spec[k][0] = spec[k][1] = 0.0;
            continue;
        }
        const double xi = line.frequency(k);
        const double s = ta * std::pow(xi * xi, o.power);
        const double m = k == 0 ? 1.0 : ml_one(alpha, -s, o.ml).value;
        spec[k][0] *= m;
        spec[k][1] *= m;
        if (k == K - 1 && m * mag > o.aliasing_tolerance * spec_max) {
            throw AliasingError("Nyquist mode retains " + detail::fmt_arg(m * mag / spec_max) +
                                " of the spectral peak at t = " + detail::fmt_arg(t) + "; refine the grid");
        }
    }
    fft.inverse();
    std::vector<double> out(M);
    const double scale = 1.0 / static_cast<double>(M);
    for (std::size_t i = 0; i < M; ++i) out[i] = fft.real()[i] * scale;
    return out;
}

enum class DataScaling {
    fixed,         // one profile for every time
    self_similar,  // width proportional to t^{alpha/(2a)}, reaching `width` at the last time
};

inline const char* to_string(DataScaling s) { return s == DataScaling::fixed ? "fixed" : "self_similar"; }

struct LpLqStudy {
    double alpha = 1.0;
    double p = 4.0 / 3.0;
    double q = 4.0;
    std::vector<double> times = log_times(10.0, 1e3, 10);
    double width = 0.25;  // Gaussian width (at the last time when self-similar)
    DataScaling scaling = DataScaling::self_similar;
    double half_width = 200.0;
    std::size_t points = std::size_t{1} << 14;
    double power = 1.0;

    void validate() const {
        detail::check_order(alpha);
        if (!(p > 1.0 && p <= 2.0)) throw ParameterError("p must lie in (1,2], got " + detail::fmt_arg(p), "p");
        if (!(q >= 2.0) || !std::isfinite(q)) {
            throw ParameterError("q must be finite and >= 2, got " + detail::fmt_arg(q), "q");
        }
        if (!(1.0 / p - 1.0 / q < 2.0)) throw ParameterError("exponents need 1/p - 1/q < 2", "q");
        if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("width must be > 0", "width");
        if (!(power > 0.0) || !std::isfinite(power)) throw ParameterError("power must be > 0", "power");
        detail::check_times(times);
        std::vector<double> pos;
        for (double t : times) {
            if (t > 0.0) pos.push_back(t);
        }
        if (pos.size() < 5 || *std::max_element(pos.begin(), pos.end()) <
                                   100.0 * *std::min_element(pos.begin(), pos.end())) {
            throw InsufficientSamplesError("study needs at least 5 positive times spanning 2 decades", "times");
        }
        PeriodizedLine(half_width, points);
    }

    /// -alpha/2 (1/p - 1/q) for a = 1; NaN otherwise.
    double predicted_slope() const {
        return power == 1.0 ? -0.5 * alpha * (1.0 / p - 1.0 / q) : std::numeric_limits<double>::quiet_NaN();
    }
};

struct LpLqResult {
    DecayFitResult fit;               // norms = |w(t)|_q, bounds = t^slope |w0|_p
    std::vector<double> data_norms;   // |w0|_p used at each time
    std::vector<double> l2_ratios;    // |w(t)|_2 / |w0|_2
    double predicted_slope = 0.0;
    double max_seam_ratio = 0.0;      // max over times of |w(t)| at the seam / max|w0|
};

inline constexpr double kBoxEscapeTolerance = 1e-6;

/// Solves every time, fits the slope of log(|w(t)|_q / |w0|_p) against log t.
inline LpLqResult run_lplq_study(const LpLqStudy& s, const MLOptions& ml = propagator_options()) {
    s.validate();
    const PeriodizedLine line(s.half_width, s.points);
    const std::size_t n = s.times.size();
    const double t_ref = *std::max_element(s.times.begin(), s.times.end());
    const double predicted = s.predicted_slope();
    LpLqResult r;
    r.predicted_slope = predicted;
    r.data_norms.resize(n);
    r.l2_ratios.resize(n);
    auto& f = r.fit;
    f.times = s.times;
    f.norms.resize(n);
    f.bounds.resize(n);
    std::vector<double> seam(n);
    LineSolveOptions o;
    o.power = s.power;
    o.ml = ml;
    parallel_for(n, [&](std::size_t i) {
        const double t = s.times[i];
        double w = s.width;
        if (s.scaling == DataScaling::self_similar) w *= std::pow(t / t_ref, s.alpha / (2.0 * s.power));
        const auto u0 = gaussian_profile(line, w);
        const auto u = solve_heat_line(line, u0, s.alpha, t, o);
        const double peak0 = detail::sup_abs(u0);
        seam[i] = detail::seam_value(u) / peak0;
        if (seam[i] > kBoxEscapeTolerance) {
            throw BoxEscapeError("solution reaches " + detail::fmt_arg(seam[i]) +
                                 " of the initial peak at x = +-X for t = " + detail::fmt_arg(t) +
                                 "; enlarge the box");
        }
        r.data_norms[i] = lp_norm(u0, s.p, line.dx());
        r.l2_ratios[i] = lp_norm(u, 2.0, line.dx()) / lp_norm(u0, 2.0, line.dx());
        f.norms[i] = lp_norm(u, s.q, line.dx());
        f.bounds[i] = t > 0.0 ? std::pow(t, predicted) * r.data_norms[i] : std::numeric_limits<double>::infinity();
    });
    r.max_seam_ratio = *std::max_element(seam.begin(), seam.end());

    std::vector<double> ft;
    std::vector<double> fr;
    for (std::size_t i = 0; i < n; ++i) {
        const double ratio = f.norms[i] / f.bounds[i];
        if (ratio > f.bound_constant_estimate) {
            f.bound_constant_estimate = ratio;
            f.sup_time = f.times[i];
        }
        if (f.times[i] > 0.0) {
            ft.push_back(f.times[i]);
            fr.push_back(f.norms[i] / r.data_norms[i]);
        }
    }
    const auto fit = loglog_fit(ft, fr);
    f.fitted_slope = fit.slope;
    f.slope_stderr = fit.stderr_;
    f.theorem_bound_slope = predicted;
    return r;
}

}  // namespace fracspec
