#pragma once

// Closed-form spectral solutions of the time-fractional heat, wave and
// multi-term equations driven by an operator with discrete spectrum, their
// time derivatives, and sampled certification of the decay estimates.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracspec/errors.hpp"
#include "fracspec/mittag_leffler.hpp"
#include "fracspec/parallel.hpp"
#include "fracspec/spectral_operator.hpp"

namespace fracspec {

enum class EvolutionKind { heat, wave, multiterm_heat, multiterm_wave };

inline const char* to_string(EvolutionKind k) {
    switch (k) {
        case EvolutionKind::heat: return "heat";
        case EvolutionKind::wave: return "wave";
        case EvolutionKind::multiterm_heat: return "multiterm_heat";
        case EvolutionKind::multiterm_wave: return "multiterm_wave";
    }
    return "?";
}

inline EvolutionKind parse_evolution_kind(std::string_view s) {
    if (s == "heat") return EvolutionKind::heat;
    if (s == "wave") return EvolutionKind::wave;
    if (s == "multiterm_heat" || s == "multiterm-heat") return EvolutionKind::multiterm_heat;
    if (s == "multiterm_wave" || s == "multiterm-wave") return EvolutionKind::multiterm_wave;
    throw ParameterError("unknown evolution kind '" + std::string(s) + "'", "kind");
}

inline bool is_multiterm(EvolutionKind k) {
    return k == EvolutionKind::multiterm_heat || k == EvolutionKind::multiterm_wave;
}

inline bool is_wave(EvolutionKind k) {
    return k == EvolutionKind::wave || k == EvolutionKind::multiterm_wave;
}

inline constexpr double kDefaultHorizon = 10.0;

struct EvolutionProblem {
    EvolutionKind kind = EvolutionKind::heat;
    double beta = 1.0;
    std::vector<double> sub_orders;
    std::vector<double> sub_weights;
    SpectralCoefficients w0;
    std::optional<SpectralCoefficients> w1;
    double horizon = kDefaultHorizon;

    void validate(const SpectralOperator& op) const {
        if (is_wave(kind)) {
            if (!(beta > 1.0 && beta < 2.0)) {
                throw ParameterError("wave order beta must lie in (1,2), got " + detail::fmt_arg(beta),
                                     "beta");
            }
            if (!w1) throw ParameterError("initial velocity w1 is required for wave kinds", "w1");
        } else {
            if (!(beta > 0.0 && beta <= 1.0)) {
                throw ParameterError("heat order beta must lie in (0,1], got " + detail::fmt_arg(beta),
                                     "beta");
            }
            if (w1) throw ParameterError("initial velocity w1 is only allowed for wave kinds", "w1");
        }
        if (is_multiterm(kind)) {
            if (sub_orders.empty()) throw ParameterError("multi-term kinds need sub-orders", "sub_orders");
            if (!(horizon > 0.0) || !std::isfinite(horizon)) {
                throw ParameterError("horizon T must be > 0", "horizon");
            }
        } else if (!sub_orders.empty()) {
            throw ParameterError("sub-orders are only allowed for multi-term kinds", "sub_orders");
        }
        if (sub_weights.size() != sub_orders.size()) {
            throw ParameterError("sub-weights and sub-orders differ in length", "sub_weights");
        }
        double prev = beta;
        for (double b : sub_orders) {
            if (!(b > 0.0 && b < prev)) {
                throw ParameterError("sub-orders must be strictly decreasing in (0, beta)", "sub_orders");
            }
            prev = b;
        }
        for (double s : sub_weights) {
            if (!(s >= 0.0) || !std::isfinite(s)) {
                throw ParameterError("sub-weights must be finite and >= 0", "sub_weights");
            }
        }
        detail::check_coefficients(op, w0);
        if (w1) detail::check_coefficients(op, *w1);
    }
};

struct SolutionSnapshot {
    double t = 0.0;
    SpectralCoefficients coefficients;
    double l2_norm = 0.0;
    std::map<double, double> sobolev_norms;
};

namespace detail {

inline void check_times(std::span<const double> times, double t_max = std::numeric_limits<double>::infinity()) {
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw ParameterError("times must be finite and >= 0, got " + fmt_arg(t), "times");
        }
        if (t > t_max) {
            throw ParameterError("time " + fmt_arg(t) + " exceeds the horizon " + fmt_arg(t_max), "times");
        }
    }
}

// Evaluates value(mode, t) for every (time, mode) pair and packages snapshots.
template <class ModeValue>
std::vector<SolutionSnapshot> build_snapshots(const SpectralOperator& op, std::span<const double> times,
                                              const std::vector<double>& deltas, ModeValue value) {
    const std::size_t n = op.size();
    std::vector<SolutionSnapshot> out(times.size());
    for (std::size_t it = 0; it < times.size(); ++it) {
        out[it].t = times[it];
        out[it].coefficients = {std::vector<double>(n, 0.0), op.label()};
    }
    parallel_for(times.size() * n, [&](std::size_t idx) {
        const std::size_t it = idx / n;
        const std::size_t m = idx % n;
        out[it].coefficients.values[m] = value(m, times[it]);
    });
    for (auto& s : out) {
        s.l2_norm = sobolev_norm(op, s.coefficients, {0.0});
        for (double d : deltas) s.sobolev_norms[d] = sobolev_norm(op, s.coefficients, {d});
    }
    return out;
}

}  // namespace detail

/// Mode amplitude E_beta(-gamma t^beta).
inline double heat_mode(double beta, double gamma, double t, const MLOptions& opt = propagator_options()) {
    if (t == 0.0 || gamma == 0.0) return 1.0;
    return ml_one(beta, -gamma * std::pow(t, beta), opt).value;
}

/// Mode amplitude E_beta(-gamma t^beta) w0 + t E_{beta,2}(-gamma t^beta) w1.
inline double wave_mode(double beta, double gamma, double t, double w0, double w1,
                        const MLOptions& opt = propagator_options()) {
    if (t == 0.0) return w0;
    const double z = -gamma * std::pow(t, beta);
    double v = 0.0;
    if (w0 != 0.0) v += w0 * ml_one(beta, z, opt).value;
    if (w1 != 0.0) v += w1 * t * ml_two({beta, 2.0}, z, opt).value;
    return v;
}

/// Mode amplitude of the multi-term equation
///   D^beta u + sum_i sigma_i D^{beta_i} u + gamma u = 0,
/// as sums of multivariate Mittag-Leffler functions. The velocity sum runs
/// over the orders above one only (Caputo initial data per order).
inline double multiterm_mode(double beta, const std::vector<double>& sub_orders,
                             const std::vector<double>& sub_weights, double gamma, double t, double w0,
                             double w1, const MLOptions& opt = propagator_options()) {
    if (t == 0.0) return w0;
    const std::size_t m = sub_orders.size();
    MultiML f;
    f.betas.resize(m + 1);
    std::vector<double> z(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        f.betas[i] = beta - sub_orders[i];
        z[i] = -sub_weights[i] * std::pow(t, beta - sub_orders[i]);
    }
    f.betas[m] = beta;
    z[m] = -gamma * std::pow(t, beta);
    double v = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const double bk = k == 0 ? beta : sub_orders[k - 1];
        const double sk = k == 0 ? 1.0 : sub_weights[k - 1];
        if (sk == 0.0) continue;
        const double shift = beta - bk;
        const double tk = std::pow(t, shift);
        if (w0 != 0.0) {
            f.lambda = shift + 1.0;
            v += w0 * sk * tk * ml_multivariate(f, z, opt).value;
        }
        if (w1 != 0.0 && bk > 1.0) {
            f.lambda = shift + 2.0;
            v += w1 * sk * tk * t * ml_multivariate(f, z, opt).value;
        }
    }
    return v;
}

inline std::vector<SolutionSnapshot> solve_heat(const SpectralOperator& op, const SpectralCoefficients& w0,
                                                double beta, std::span<const double> times,
                                                const std::vector<double>& deltas = {},
                                                const MLOptions& opt = propagator_options()) {
    EvolutionProblem p;
    p.kind = EvolutionKind::heat;
    p.beta = beta;
    p.w0 = w0;
    p.validate(op);
    detail::check_times(times);
    return detail::build_snapshots(op, times, deltas, [&](std::size_t m, double t) {
        if (t == 0.0) return w0.values[m];
        return heat_mode(beta, op.eigenvalue(m), t, opt) * w0.values[m];
    });
}

inline std::vector<SolutionSnapshot> solve_wave(const SpectralOperator& op, const SpectralCoefficients& w0,
                                                const SpectralCoefficients& w1, double beta,
                                                std::span<const double> times,
                                                const std::vector<double>& deltas = {},
                                                const MLOptions& opt = propagator_options()) {
    EvolutionProblem p;
    p.kind = EvolutionKind::wave;
    p.beta = beta;
    p.w0 = w0;
    p.w1 = w1;
    p.validate(op);
    detail::check_times(times);
    return detail::build_snapshots(op, times, deltas, [&](std::size_t m, double t) {
        return wave_mode(beta, op.eigenvalue(m), t, w0.values[m], w1.values[m], opt);
    });
}

inline std::vector<SolutionSnapshot> solve_multiterm(const SpectralOperator& op, const EvolutionProblem& p,
                                                     std::span<const double> times,
                                                     const std::vector<double>& deltas = {},
                                                     const MLOptions& opt = propagator_options()) {
    p.validate(op);
    if (!is_multiterm(p.kind)) throw ParameterError("problem kind is not multi-term", "kind");
    detail::check_times(times, p.horizon);
    return detail::build_snapshots(op, times, deltas, [&](std::size_t m, double t) {
        const double v1 = p.w1 ? p.w1->values[m] : 0.0;
        return multiterm_mode(p.beta, p.sub_orders, p.sub_weights, op.eigenvalue(m), t, p.w0.values[m], v1, opt);
    });
}

/// Dispatch on the problem kind.
inline std::vector<SolutionSnapshot> solve(const SpectralOperator& op, const EvolutionProblem& p,
                                           std::span<const double> times, const std::vector<double>& deltas = {},
                                           const MLOptions& opt = propagator_options()) {
    switch (p.kind) {
        case EvolutionKind::heat: return solve_heat(op, p.w0, p.beta, times, deltas, opt);
        case EvolutionKind::wave:
            p.validate(op);
            return solve_wave(op, p.w0, *p.w1, p.beta, times, deltas, opt);
        default: return solve_multiterm(op, p, times, deltas, opt);
    }
}

/// d/dt of the heat solution: -gamma t^{beta-1} E_{beta,beta}(-gamma t^beta) w0 per mode.
inline std::vector<SolutionSnapshot> heat_time_derivative(const SpectralOperator& op,
                                                          const SpectralCoefficients& w0, double beta,
                                                          std::span<const double> times,
                                                          const std::vector<double>& deltas = {},
                                                          const MLOptions& opt = propagator_options()) {
    EvolutionProblem p;
    p.beta = beta;
    p.w0 = w0;
    p.validate(op);
    detail::check_times(times);
    for (double t : times) {
        if (t == 0.0 && beta < 1.0) {
            throw DomainError("time derivative is singular at t = 0 for beta < 1", "times");
        }
    }
    return detail::build_snapshots(op, times, deltas, [&](std::size_t m, double t) {
        const double gamma = op.eigenvalue(m);
        if (t == 0.0) return -gamma * w0.values[m];
        return heat_derivative_kernel(beta, gamma, t, opt) * w0.values[m];
    });
}

/// d/dt of the wave solution: the heat kernel on w0 plus E_beta(-gamma t^beta) w1.
inline std::vector<SolutionSnapshot> wave_time_derivative(const SpectralOperator& op,
                                                          const SpectralCoefficients& w0,
                                                          const SpectralCoefficients& w1, double beta,
                                                          std::span<const double> times,
                                                          const std::vector<double>& deltas = {},
                                                          const MLOptions& opt = propagator_options()) {
    EvolutionProblem p;
    p.kind = EvolutionKind::wave;
    p.beta = beta;
    p.w0 = w0;
    p.w1 = w1;
    p.validate(op);
    detail::check_times(times);
    return detail::build_snapshots(op, times, deltas, [&](std::size_t m, double t) {
        if (t == 0.0) return w1.values[m];
        const double gamma = op.eigenvalue(m);
        return heat_derivative_kernel(beta, gamma, t, opt) * w0.values[m] +
               heat_mode(beta, gamma, t, opt) * w1.values[m];
    });
}

// ---------------------------------------------------------------------------
// Decay estimates

enum class EstimateId {
    heat_1, heat_2, heat_3,
    wave_1, wave_2, wave_3, wave_4,
    multi_heat_1, multi_heat_2, multi_heat_3,
    multi_wave_1, multi_wave_2, multi_wave_3, multi_wave_4,
};

inline constexpr EstimateId kAllEstimates[] = {
    EstimateId::heat_1,       EstimateId::heat_2,       EstimateId::heat_3,       EstimateId::wave_1,
    EstimateId::wave_2,       EstimateId::wave_3,       EstimateId::wave_4,       EstimateId::multi_heat_1,
    EstimateId::multi_heat_2, EstimateId::multi_heat_3, EstimateId::multi_wave_1, EstimateId::multi_wave_2,
    EstimateId::multi_wave_3, EstimateId::multi_wave_4,
};

inline const char* to_string(EstimateId id) {
    switch (id) {
        case EstimateId::heat_1: return "heat-1";
        case EstimateId::heat_2: return "heat-2";
        case EstimateId::heat_3: return "heat-3";
        case EstimateId::wave_1: return "wave-1";
        case EstimateId::wave_2: return "wave-2";
        case EstimateId::wave_3: return "wave-3";
        case EstimateId::wave_4: return "wave-4";
        case EstimateId::multi_heat_1: return "multi-heat-1";
        case EstimateId::multi_heat_2: return "multi-heat-2";
        case EstimateId::multi_heat_3: return "multi-heat-3";
        case EstimateId::multi_wave_1: return "multi-wave-1";
        case EstimateId::multi_wave_2: return "multi-wave-2";
        case EstimateId::multi_wave_3: return "multi-wave-3";
        case EstimateId::multi_wave_4: return "multi-wave-4";
    }
    return "?";
}

inline EstimateId parse_estimate(std::string_view s) {
    for (EstimateId id : kAllEstimates) {
        if (s == to_string(id)) return id;
    }
    throw UnknownEstimateError("unknown estimate id '" + std::string(s) + "'", "estimate");
}

inline bool is_multiterm(EstimateId id) { return id >= EstimateId::multi_heat_1; }

/// Base estimate with the multi-term prefactor removed (multi-heat-2 -> heat-2 shape).
inline EstimateId base_shape(EstimateId id) {
    switch (id) {
        case EstimateId::multi_heat_1: return EstimateId::heat_1;
        case EstimateId::multi_heat_2: return EstimateId::heat_2;
        case EstimateId::multi_heat_3: return EstimateId::heat_3;
        case EstimateId::multi_wave_1: return EstimateId::wave_1;
        case EstimateId::multi_wave_2: return EstimateId::wave_2;
        case EstimateId::multi_wave_3: return EstimateId::wave_3;
        case EstimateId::multi_wave_4: return EstimateId::wave_4;
        default: return id;
    }
}

/// Data norms entering the estimates; NaN marks a norm that was not supplied.
struct DataNorms {
    double w0 = std::numeric_limits<double>::quiet_NaN();               // H^delta
    double w0_minus_2 = std::numeric_limits<double>::quiet_NaN();       // H^{delta-2}
    double w1 = std::numeric_limits<double>::quiet_NaN();               // H^delta
    double w1_minus_2_over_beta = std::numeric_limits<double>::quiet_NaN();  // H^{delta-2/beta}
    double w1_minus_2 = std::numeric_limits<double>::quiet_NaN();       // H^{delta-2}
};

inline DataNorms data_norms(const SpectralOperator& op, const SpectralCoefficients& w0,
                            const std::optional<SpectralCoefficients>& w1, double delta, double beta) {
    DataNorms n;
    n.w0 = sobolev_norm(op, w0, {delta});
    n.w0_minus_2 = sobolev_norm(op, w0, {delta - 2.0});
    if (w1) {
        n.w1 = sobolev_norm(op, *w1, {delta});
        n.w1_minus_2_over_beta = sobolev_norm(op, *w1, {delta - 2.0 / beta});
        n.w1_minus_2 = sobolev_norm(op, *w1, {delta - 2.0});
    }
    return n;
}

/// Everything besides data norms that a bound shape depends on.
struct BoundShape {
    EstimateId id = EstimateId::heat_2;
    double beta = 1.0;
    std::vector<double> sub_orders;
    std::vector<double> sub_weights;
};

namespace detail {

inline double need(double v, const char* field) {
    if (std::isnan(v)) throw ParameterError(std::string("estimate requires the data norm ") + field, field);
    return v;
}

}  // namespace detail

/// sum_{k=0}^m sigma_k t^{beta - beta_k}, sigma_0 = 1.
inline double multiterm_prefactor(double beta, const std::vector<double>& sub_orders,
                                  const std::vector<double>& sub_weights, double t) {
    double s = 1.0;
    for (std::size_t i = 0; i < sub_orders.size(); ++i) s += sub_weights[i] * std::pow(t, beta - sub_orders[i]);
    return s;
}

/// t-shape of an estimate with its constant set to one.
inline double decay_bound(const BoundShape& shape, const DataNorms& n, double t) {
    if (!(t >= 0.0)) throw ParameterError("t must be >= 0", "t");
    const double b = shape.beta;
    const double tb = std::pow(t, b);
    double v = 0.0;
    switch (base_shape(shape.id)) {
        case EstimateId::heat_1: v = detail::need(n.w0, "w0"); break;
        case EstimateId::heat_2: v = detail::need(n.w0, "w0") / (1.0 + tb); break;
        case EstimateId::heat_3:
            v = t == 0.0 ? std::numeric_limits<double>::infinity()
                         : (1.0 + 1.0 / tb) * detail::need(n.w0_minus_2, "w0_minus_2");
            break;
        case EstimateId::wave_1: v = detail::need(n.w0, "w0") + t * detail::need(n.w1, "w1"); break;
        case EstimateId::wave_2:
            v = (detail::need(n.w0, "w0") + t * detail::need(n.w1, "w1")) / (1.0 + tb);
            break;
        case EstimateId::wave_3:
            v = detail::need(n.w0, "w0") + (1.0 + t) * detail::need(n.w1_minus_2_over_beta, "w1_minus_2_over_beta");
            break;
        case EstimateId::wave_4:
            if (is_multiterm(shape.id)) {
                // both data in H^{delta-2}, shared (1 + t^{-beta}) factor
                v = t == 0.0 ? std::numeric_limits<double>::infinity()
                             : (1.0 + 1.0 / tb) * (detail::need(n.w0_minus_2, "w0_minus_2") +
                                                   t * detail::need(n.w1_minus_2, "w1_minus_2"));
            } else {
                v = detail::need(n.w0, "w0") + (t == 0.0 ? 0.0 : t * (1.0 + 1.0 / tb)) *
                                                   detail::need(n.w1_minus_2, "w1_minus_2");
            }
            break;
        default: break;
    }
    if (is_multiterm(shape.id)) v *= multiterm_prefactor(b, shape.sub_orders, shape.sub_weights, t);
    return v;
}

struct DecayFitResult {
    std::vector<double> times;
    std::vector<double> norms;
    std::vector<double> bounds;
    double fitted_slope = 0.0;  // NaN when the norm underflows inside the window
    double slope_stderr = 0.0;
    double theorem_bound_slope = 0.0;
    double bound_constant_estimate = 0.0;  // sup of norm / bound over the samples
    double sup_time = 0.0;
};

struct LogLogFit {
    double slope = 0.0;
    double stderr_ = 0.0;
};

/// Least-squares slope of log y against log x.
inline LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) throw InsufficientSamplesError("slope fit needs at least 3 points", "times");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw DomainError("log-log fit needs positive values", "norms");
        }
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    LogLogFit f;
    f.slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::log(y[i]) - my - f.slope * (std::log(x[i]) - mx);
        ssr += r * r;
    }
    f.stderr_ = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    return f;
}

/// Time window for the slope fit; the sup ratio always uses every sample.
struct FitWindow {
    double t_min = 0.0;
    double t_max = std::numeric_limits<double>::infinity();
};

/// Norm-to-bound ratios over all snapshots and the log-log slope over the window.
inline DecayFitResult verify_decay(const SpectralOperator& op, const std::vector<SolutionSnapshot>& snaps,
                                   const BoundShape& shape, SobolevIndex delta, const DataNorms& norms,
                                   FitWindow window = {}) {
    if (snaps.size() < 5) {
        throw InsufficientSamplesError("decay verification needs at least 5 snapshots, got " +
                                           std::to_string(snaps.size()),
                                       "times");
    }
    DecayFitResult r;
    std::vector<double> ft;
    std::vector<double> pt;
    std::vector<double> fn;
    std::vector<double> fb;
    for (const auto& s : snaps) {
        const double norm = sobolev_norm(op, s.coefficients, delta);
        const double bound = decay_bound(shape, norms, s.t);
        r.times.push_back(s.t);
        r.norms.push_back(norm);
        r.bounds.push_back(bound);
        if (bound > 0.0) {
            const double ratio = norm / bound;
            if (ratio > r.bound_constant_estimate) {
                r.bound_constant_estimate = ratio;
                r.sup_time = s.t;
            }
        } else if (norm > 0.0) {
            r.bound_constant_estimate = std::numeric_limits<double>::infinity();
            r.sup_time = s.t;
        }
        if (s.t > 0.0 && s.t >= window.t_min && s.t <= window.t_max) {
            ft.push_back(s.t);
            if (norm > 0.0 && bound > 0.0) {
                pt.push_back(s.t);
                fn.push_back(norm);
                fb.push_back(bound);
            }
        }
    }
    auto spans = [](const std::vector<double>& t) {
        if (t.size() < 5) return false;
        const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
        return *hi >= 100.0 * *lo;
    };
    if (!spans(ft)) {
        throw InsufficientSamplesError("slope fit needs at least 5 positive times spanning 2 decades", "times");
    }
    // Norms that underflow to zero (exponential decay) leave no power law to fit.
    if (!spans(pt)) {
        r.fitted_slope = r.slope_stderr = r.theorem_bound_slope = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const auto fit = loglog_fit(pt, fn);
    r.fitted_slope = fit.slope;
    r.slope_stderr = fit.stderr_;
    r.theorem_bound_slope = loglog_fit(pt, fb).slope;
    return r;
}

/// n log-spaced times per decade over [t_lo, t_hi], both ends included.
inline std::vector<double> log_times(double t_lo, double t_hi, std::size_t per_decade = 40) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw ParameterError("need 0 < t_lo < t_hi", "times");
    const double decades = std::log10(t_hi / t_lo);
    const auto count = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade))) + 1;
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i) {
        t[i] = t_lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    t.back() = t_hi;
    return t;
}

/// Coefficient-space error of the one-sided difference (w(h) - w(0)) / h against w1.
inline double initial_velocity_error(const SpectralOperator& op, const SpectralCoefficients& w0,
                                     const SpectralCoefficients& w1, double beta, double h,
                                     const MLOptions& opt = propagator_options()) {
    if (!(h > 0.0)) throw ParameterError("step h must be > 0", "h");
    const std::vector<double> ts = {0.0, h};
    const auto s = solve_wave(op, w0, w1, beta, ts, {}, opt);
    std::vector<double> d(op.size());
    for (std::size_t m = 0; m < op.size(); ++m) {
        d[m] = (s[1].coefficients.values[m] - s[0].coefficients.values[m]) / h - w1.values[m];
    }
    return scaled_norm2(d);
}

}  // namespace fracspec
