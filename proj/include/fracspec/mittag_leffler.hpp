#pragma once

// Mittag-Leffler functions on the real line.
//
//   E_{a,r}(z)          = sum_k z^k / Gamma(a k + r)
//   E_{(b_1..b_m),l}(z) = sum_{k_1..k_m} (k_1+..+k_m)! / Gamma(sum b_i k_i + l)
//                           * prod z_i^{k_i} / k_i!
//
// Two-parameter evaluation picks between three routes by the scaled
// magnitude S = |z|^{1/a}, which controls both the cancellation of the
// Taylor series (its terms peak near e^S) and the accuracy of the large
// negative-argument expansion (its smallest term is near e^{-S}):
//   - Taylor series in double precision for small S,
//   - Taylor series in binary128 for moderate S,
//   - the algebraic expansion plus, for 1 < a < 2, the two oscillatory
//     exponential contributions from the poles s* = S exp(+-i pi / a).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "fracspec/detail/ml_contour.hpp"
#include "fracspec/detail/quad.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/gamma.hpp"
#include "fracspec/summation.hpp"

namespace fracspec {

struct TwoParamML {
    double alpha;  // order, > 0
    double rho;    // second parameter
};

struct MultiML {
    std::vector<double> betas;  // m orders, all > 0
    double lambda;
};

enum class MLMethod { taylor_series, asymptotic_expansion, multishell_series, laplace_contour };

inline const char* to_string(MLMethod m) {
    switch (m) {
        case MLMethod::taylor_series: return "taylor_series";
        case MLMethod::asymptotic_expansion: return "asymptotic_expansion";
        case MLMethod::multishell_series: return "multishell_series";
        case MLMethod::laplace_contour: return "laplace_contour";
    }
    return "unknown";
}

struct EvalReport {
    double value = 0.0;
    std::size_t terms_used = 1;
    MLMethod method = MLMethod::taylor_series;
    double est_abs_error = 0.0;
    bool extended_precision = false;  // binary128 accumulation was needed
};

// Route selection for the multivariate function; automatic picks by cost.
enum class MultiRoute { automatic, series, contour };

struct MLOptions {
    double z_cap = 1e8;         // |z| limit for the two-parameter function
    double tol = 1e-12;         // accept when est_abs_error <= tol * max(1, |value|)
    double multi_z_cap = 1e4;   // |z_i| limit for the multivariate function
    std::size_t max_shells = 600;
    MultiRoute multi_route = MultiRoute::automatic;
};

/// Settings for propagators E(-gamma t^beta) over large spectra and long
/// times, where the asymptotic routes stay accurate: argument caps lifted.
inline MLOptions propagator_options() {
    MLOptions o;
    o.z_cap = std::numeric_limits<double>::infinity();
    o.multi_z_cap = std::numeric_limits<double>::infinity();
    return o;
}

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Relative error budget of a single double-precision term (Lanczos Gamma
// plus the power) and of a single binary128 term computed through exp/log.
inline constexpr double kDoubleTermRelErr = 2e-15;
inline constexpr double kQuadTermRelErr = 1e-31;

struct Attempt {
    double value = 0.0;
    double est = std::numeric_limits<double>::infinity();
    std::size_t terms = 0;
    bool converged = false;
};

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ParameterError("Mittag-Leffler order must be finite and > 0, got " +
                                 fmt_arg(alpha),
                             "alpha");
    }
}

// Taylor series in double precision. Terms are z^k / Gamma(alpha k + rho),
// computed from a running power while Gamma is representable and through
// logarithms afterwards.
inline Attempt taylor_double(double alpha, double rho, double z, std::size_t max_terms = 400000) {
    Attempt out;
    CompensatedSum<double> sum;
    double abs_sum = 0.0;
    const double log_abs_z = std::log(std::abs(z));
    const double scaled = std::exp(log_abs_z / alpha);  // S = |z|^{1/alpha}
    double power = 1.0;
    double prev_abs = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < max_terms; ++k) {
        const double kd = static_cast<double>(k);
        const double arg = alpha * kd + rho;
        double term;
        if (std::isfinite(power) && power != 0.0 && arg <= 170.0) {
            term = power * reciprocal_gamma(arg);
        } else {
            const auto lr = log_reciprocal_gamma(arg);
            const int zsign = (z < 0.0 && (k % 2 == 1)) ? -1 : 1;
            term = lr.sign == 0 ? 0.0 : zsign * lr.sign * std::exp(kd * log_abs_z + lr.log_abs);
        }
        if (!std::isfinite(term)) {
            out.value = term;
            out.terms = k + 1;
            return out;
        }
        sum += term;
        const double at = std::abs(term);
        abs_sum += at;
        power *= z;
        const double partial = std::abs(sum.value());
        // Past the peak of the term sequence (alpha k > S) the terms decrease
        // geometrically; stop once they drop below the working precision.
        if (arg > scaled + 2.0 && at <= prev_abs && at <= 0.25 * kEps * std::max(partial, 1e-300)) {
            const double ratio = prev_abs > 0.0 ? at / prev_abs : 0.0;
            const double tail = ratio < 1.0 ? at * ratio / (1.0 - ratio) : at;
            out.value = sum.value();
            out.terms = k + 1;
            out.est = tail + kDoubleTermRelErr * abs_sum + kEps * partial;
            out.converged = true;
            return out;
        }
        if (at > 0.0) prev_abs = at;
    }
    out.value = sum.value();
    out.terms = max_terms;
    return out;
}

// Same series accumulated in binary128.
inline Attempt taylor_quad(double alpha, double rho, double z, std::size_t max_terms = 400000) {
    Attempt out;
    CompensatedSum<quad> sum;
    quad abs_sum = 0;
    const quad qa = alpha;
    const quad qr = rho;
    const quad log_abs_z = logq(q_abs(quad(z)));
    const double scaled = std::exp(std::log(std::abs(z)) / alpha);
    quad prev_abs = HUGE_VALQ;
    for (std::size_t k = 0; k < max_terms; ++k) {
        const quad kq = quad(static_cast<double>(k));
        const quad arg = qa * kq + qr;
        const auto lr = q_log_reciprocal_gamma(arg);
        quad term = 0;
        if (lr.sign != 0) {
            const int zsign = (z < 0.0 && (k % 2 == 1)) ? -1 : 1;
            term = quad(zsign * lr.sign) * expq(kq * log_abs_z + lr.log_abs);
        }
        sum += term;
        const quad at = q_abs(term);
        abs_sum += at;
        const quad partial = q_abs(sum.value());
        if (static_cast<double>(arg) > scaled + 2.0 && at <= prev_abs &&
            at <= quad(0.25) * kQuadEps * (partial > 0 ? partial : quad(1e-300))) {
            const quad ratio = prev_abs > 0 ? at / prev_abs : quad(0);
            const quad tail = ratio < 1 ? at * ratio / (1 - ratio) : at;
            out.value = static_cast<double>(sum.value());
            out.terms = k + 1;
            out.est = static_cast<double>(tail + quad(kQuadTermRelErr) * abs_sum) +
                      0.5 * kEps * std::abs(out.value);
            out.converged = true;
            return out;
        }
        if (at > 0) prev_abs = at;
    }
    out.value = static_cast<double>(sum.value());
    out.terms = max_terms;
    return out;
}

// Large-argument expansion of E_{alpha,rho}(-s), s > 0, 0 < alpha < 2:
//   sum_{k>=1} (-1)^{k+1} s^{-k} / Gamma(rho - alpha k)
// truncated at its smallest envelope term, plus the pole pair for alpha > 1.
inline Attempt asymptotic_negative(double alpha, double rho, double s,
                                   std::size_t max_terms = 200000) {
    Attempt out;
    const double log_s = std::log(s);
    const double log_pi = std::log(std::numbers::pi);
    const double scaled = std::exp(log_s / alpha);
    const double log_scaled = log_s / alpha;

    CompensatedSum<double> sum;
    double abs_sum = 0.0;
    double residue_err = 0.0;

    if (alpha > 1.0) {
        const double phase_angle = std::numbers::pi / alpha;
        const double log_mag = (1.0 - rho) * log_scaled + scaled * std::cos(phase_angle);
        const double mag = 2.0 / alpha * std::exp(log_mag);
        const double phase = (1.0 - rho) * phase_angle + scaled * std::sin(phase_angle);
        const double residue = mag * std::cos(phase);
        sum += residue;
        abs_sum += std::abs(residue);
        residue_err = mag * kEps * (4.0 + scaled);
    } else {
        // Exponentially small contribution of the singularity near the cut,
        // not represented by the algebraic series.
        residue_err = std::exp((1.0 - rho) * log_scaled - scaled) / alpha;
    }

    double best_env = std::numeric_limits<double>::infinity();
    double prev_env = std::numeric_limits<double>::infinity();
    std::size_t k = 1;
    for (; k <= max_terms; ++k) {
        const double kd = static_cast<double>(k);
        const double arg = rho - alpha * kd;
        const auto lr = log_reciprocal_gamma(arg);
        const double log_term = -kd * log_s + lr.log_abs;
        double term = 0.0;
        if (lr.sign != 0) {
            term = ((k % 2 == 1) ? 1.0 : -1.0) * lr.sign * std::exp(log_term);
        }
        // Envelope ignores the oscillating sin(pi (rho - alpha k)) factor so that
        // accidental near-zeros do not masquerade as convergence.
        double env;
        if (arg < 0.5) {
            env = std::exp(-kd * log_s + log_gamma(1.0 - arg) - log_pi);
        } else {
            env = std::abs(term);
        }
        if (env > prev_env && arg < 0.5) break;  // past the smallest term
        sum += term;
        abs_sum += std::abs(term);
        prev_env = env;
        best_env = std::min(best_env, env);
        if (env <= 0.05 * kEps * std::max(std::abs(sum.value()), 1e-300)) break;
    }
    out.value = sum.value();
    out.terms = k;
    out.est = best_env + residue_err + 4.0 * kEps * abs_sum;
    out.converged = std::isfinite(out.est);
    return out;
}

inline double accept_target(double tol, double value) {
    return tol * std::max(1.0, std::abs(value));
}

}  // namespace detail

/// Two-parameter Mittag-Leffler function E_{alpha,rho}(z) for real z.
inline EvalReport ml_two(const TwoParamML& p, double z, const MLOptions& opt = {}) {
    detail::check_alpha(p.alpha);
    if (!std::isfinite(p.rho)) throw ParameterError("rho must be finite", "rho");
    if (!std::isfinite(z)) throw ParameterError("z must be finite", "z");
    if (std::abs(z) > opt.z_cap) {
        throw ParameterError("|z| = " + detail::fmt_arg(std::abs(z)) + " exceeds the cap " +
                                 detail::fmt_arg(opt.z_cap),
                             "z");
    }
    if (z == 0.0) {
        return {reciprocal_gamma(p.rho), 1, MLMethod::taylor_series, 0.0, false};
    }

    if (z > 0.0) {
        // All terms share one sign (up to the first few when rho < 0): no
        // cancellation, double precision suffices until overflow.
        auto a = detail::taylor_double(p.alpha, p.rho, z);
        if (!std::isfinite(a.value)) {
            throw OverflowError("E_{" + detail::fmt_arg(p.alpha) + "," + detail::fmt_arg(p.rho) +
                                "}(" + detail::fmt_arg(z) + ") overflows");
        }
        if (!a.converged) {
            throw NonConvergenceError("Taylor series did not converge for z = " +
                                      detail::fmt_arg(z));
        }
        return {a.value, a.terms, MLMethod::taylor_series, a.est, false};
    }

    const double s = -z;
    const double scaled = std::exp(std::log(s) / p.alpha);
    double best_est = std::numeric_limits<double>::infinity();

    if (scaled <= 6.0) {
        auto a = detail::taylor_double(p.alpha, p.rho, z);
        if (a.converged && a.est <= detail::accept_target(opt.tol, a.value)) {
            return {a.value, a.terms, MLMethod::taylor_series, a.est, false};
        }
        best_est = std::min(best_est, a.est);
    }
    if (scaled >= 10.0 && p.alpha < 2.0) {
        auto a = detail::asymptotic_negative(p.alpha, p.rho, s);
        if (a.converged && a.est <= detail::accept_target(opt.tol, a.value)) {
            return {a.value, a.terms, MLMethod::asymptotic_expansion, a.est, false};
        }
        best_est = std::min(best_est, a.est);
    }
    if (scaled <= 80.0) {
        auto a = detail::taylor_quad(p.alpha, p.rho, z);
        if (a.converged && a.est <= detail::accept_target(opt.tol, a.value)) {
            return {a.value, a.terms, MLMethod::taylor_series, a.est, true};
        }
        best_est = std::min(best_est, a.est);
    }
    throw NonConvergenceError("E_{" + detail::fmt_arg(p.alpha) + "," + detail::fmt_arg(p.rho) +
                              "}(" + detail::fmt_arg(z) +
                              "): no method met the tolerance (best error estimate " +
                              detail::fmt_arg(best_est) + ")");
}

/// E_alpha(z) = E_{alpha,1}(z).
inline EvalReport ml_one(double alpha, double z, const MLOptions& opt = {}) {
    return ml_two({alpha, 1.0}, z, opt);
}

/// -gamma t^{alpha-1} E_{alpha,alpha}(-gamma t^alpha): the time derivative of
/// the heat propagator E_alpha(-gamma t^alpha).
inline double heat_derivative_kernel(double alpha, double gamma, double t,
                                     const MLOptions& opt = {}) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw ParameterError("heat_derivative_kernel: alpha must lie in (0,2), got " +
                                 detail::fmt_arg(alpha),
                             "alpha");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw ParameterError("heat_derivative_kernel: t must be > 0, got " + detail::fmt_arg(t),
                             "t");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw ParameterError("heat_derivative_kernel: eigenvalue must be >= 0", "gamma");
    }
    if (gamma == 0.0) return 0.0;
    const double ta = std::pow(t, alpha);
    return -gamma * std::pow(t, alpha - 1.0) * ml_two({alpha, alpha}, -gamma * ta, opt).value;
}

/// (1+s) E_{nu,rho}(-s); bounded in s > 0 whenever rho < 2.
inline double bound_margin_two(const TwoParamML& p, double s, const MLOptions& opt = {}) {
    if (!(p.rho < 2.0)) {
        throw ParameterError("bound_margin_two requires rho < 2, got " + detail::fmt_arg(p.rho),
                             "rho");
    }
    if (!(s > 0.0)) {
        throw ParameterError("bound_margin_two requires s > 0, got " + detail::fmt_arg(s), "s");
    }
    return (1.0 + s) * ml_two(p, -s, opt).value;
}

/// True iff E_alpha(-s) <= 1 / (1 + s / Gamma(1+alpha)) up to 1e-10.
inline bool bound_check_one(double alpha, double s, const MLOptions& opt = {}) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ParameterError("bound_check_one requires 0 < alpha < 1, got " +
                                 detail::fmt_arg(alpha),
                             "alpha");
    }
    if (!(s > 0.0)) {
        throw ParameterError("bound_check_one requires s > 0, got " + detail::fmt_arg(s), "s");
    }
    const double lhs = ml_one(alpha, -s, opt).value;
    const double rhs = 1.0 / (1.0 + s / gamma_real(1.0 + alpha));
    return lhs <= rhs + 1e-10;
}

namespace detail {

// Shell-by-shell summation of the multivariate series in working type T.
// Every multi-index of total degree K is visited; terms whose magnitude is
// below `prune_log` nats under the largest one seen are skipped.
template <typename T>
struct MultiShellResult {
    double value = 0.0;
    double abs_sum = 0.0;
    double last_shell_abs = 0.0;
    std::size_t terms = 0;
    std::size_t shells = 0;
    bool converged = false;
};

template <typename T>
MultiShellResult<T> multishell_sum(const std::vector<double>& betas, double lambda,
                                   const std::vector<double>& zs, double tol,
                                   std::size_t max_shells, double prune_log) {
    const std::size_t m = betas.size();
    MultiShellResult<T> out;

    std::vector<double> log_abs_z(m);
    std::vector<bool> zero(m);
    for (std::size_t i = 0; i < m; ++i) {
        zero[i] = zs[i] == 0.0;
        log_abs_z[i] = zero[i] ? -std::numeric_limits<double>::infinity() : std::log(-zs[i]);
    }
    // log k! in double for pruning, in T for the terms themselves.
    std::vector<double> lfact_d(max_shells + 2, 0.0);
    std::vector<T> lfact(max_shells + 2, T(0));
    for (std::size_t k = 2; k < lfact.size(); ++k) {
        lfact_d[k] = lfact_d[k - 1] + std::log(static_cast<double>(k));
        if constexpr (std::is_same_v<T, quad>) {
            lfact[k] = lfact[k - 1] + logq(quad(static_cast<double>(k)));
        } else {
            lfact[k] = lfact_d[k];
        }
    }
    std::vector<T> log_abs_z_t(m);
    for (std::size_t i = 0; i < m; ++i) {
        if constexpr (std::is_same_v<T, quad>) {
            log_abs_z_t[i] = zero[i] ? T(0) : logq(quad(-zs[i]));
        } else {
            log_abs_z_t[i] = log_abs_z[i];
        }
    }

    CompensatedSum<T> sum;
    T abs_sum = 0;
    double max_log = -std::numeric_limits<double>::infinity();
    int quiet_shells = 0;
    std::vector<std::size_t> idx(m, 0);

    for (std::size_t K = 0; K <= max_shells; ++K) {
        CompensatedSum<T> shell;
        T shell_abs = 0;
        // Enumerate compositions of K into m parts: idx[0..m-2] free, last fixed.
        std::fill(idx.begin(), idx.end(), 0);
        idx[m - 1] = K;
        while (true) {
            bool skip = false;
            for (std::size_t i = 0; i < m; ++i) {
                if (zero[i] && idx[i] > 0) {
                    skip = true;
                    break;
                }
            }
            if (!skip) {
                double arg = lambda;
                double log_num = lfact_d[K];
                int zsign = 1;
                for (std::size_t i = 0; i < m; ++i) {
                    arg += betas[i] * static_cast<double>(idx[i]);
                    if (idx[i] > 0) {
                        log_num += static_cast<double>(idx[i]) * log_abs_z[i] - lfact_d[idx[i]];
                        if (idx[i] % 2 == 1) zsign = -zsign;
                    }
                }
                const auto lr_d = log_reciprocal_gamma(arg);
                if (lr_d.sign != 0) {
                    const double est_log = log_num + lr_d.log_abs;
                    if (est_log >= max_log - prune_log) {
                        max_log = std::max(max_log, est_log);
                        T term;
                        if constexpr (std::is_same_v<T, quad>) {
                            quad qarg = quad(lambda);
                            quad qlog = lfact[K];
                            for (std::size_t i = 0; i < m; ++i) {
                                qarg += quad(betas[i]) * quad(static_cast<double>(idx[i]));
                                if (idx[i] > 0) {
                                    qlog += quad(static_cast<double>(idx[i])) * log_abs_z_t[i] -
                                            lfact[idx[i]];
                                }
                            }
                            const auto lr = q_log_reciprocal_gamma(qarg);
                            term = quad(zsign * lr.sign) * expq(qlog + lr.log_abs);
                        } else {
                            term = zsign * lr_d.sign * std::exp(est_log);
                        }
                        shell += term;
                        shell_abs += term < T(0) ? -term : term;
                        ++out.terms;
                    }
                }
            }
            if (m == 1) break;
            // next composition
            std::size_t pos = m - 1;
            // find rightmost free position that can be incremented
            std::size_t j = m - 2;
            while (true) {
                if (idx[m - 1] > 0) {
                    ++idx[j];
                    --idx[m - 1];
                    pos = j;
                    break;
                }
                // carry: move everything from position j back into last slot
                if (j == 0) {
                    pos = m;  // exhausted
                    break;
                }
                idx[m - 1] += idx[j];
                idx[j] = 0;
                --j;
            }
            if (pos == m) break;
        }
        sum += shell.value();
        abs_sum += shell_abs;
        out.shells = K + 1;
        const T partial = sum.value();
        const T partial_abs = partial < T(0) ? -partial : partial;
        if (shell_abs <= T(tol) * partial_abs) {
            ++quiet_shells;
        } else {
            quiet_shells = 0;
        }
        out.last_shell_abs = static_cast<double>(shell_abs);
        if (quiet_shells >= 3) {
            out.converged = true;
            break;
        }
    }
    out.value = static_cast<double>(sum.value());
    out.abs_sum = static_cast<double>(abs_sum);
    return out;
}

}  // namespace detail

/// Multivariate Mittag-Leffler function for non-positive real arguments.
inline EvalReport ml_multivariate(const MultiML& p, const std::vector<double>& zs,
                                  const MLOptions& opt = {}) {
    const std::size_t m = p.betas.size();
    if (m == 0) throw ParameterError("multivariate Mittag-Leffler needs m >= 1 orders", "betas");
    for (double b : p.betas) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw ParameterError("multivariate orders must be finite and > 0", "betas");
        }
    }
    if (!std::isfinite(p.lambda)) throw ParameterError("lambda must be finite", "lambda");
    if (zs.size() != m) {
        throw ParameterError("expected " + std::to_string(m) + " arguments, got " +
                                 std::to_string(zs.size()),
                             "zs");
    }
    bool all_zero = true;
    for (double z : zs) {
        if (!std::isfinite(z) || z > 0.0) {
            throw ParameterError("multivariate arguments must be finite and <= 0", "zs");
        }
        if (-z > opt.multi_z_cap) {
            throw ParameterError("multivariate argument magnitude exceeds cap " +
                                     detail::fmt_arg(opt.multi_z_cap),
                                 "zs");
        }
        all_zero = all_zero && z == 0.0;
    }
    if (all_zero) {
        return {reciprocal_gamma(p.lambda), 1, MLMethod::multishell_series, 0.0, false};
    }

    auto finish = [&](const auto& r, double rel_err, bool ext) -> EvalReport {
        const double est = 3.0 * r.last_shell_abs + rel_err * r.abs_sum;
        return {r.value, r.terms, MLMethod::multishell_series, est, ext};
    };
    auto contour = [&]() -> EvalReport {
        const auto c = detail::ml_multivariate_contour(p.betas, p.lambda, zs);
        return {c.value, c.evaluations, MLMethod::laplace_contour, c.est_abs_error, false};
    };

    // The series of absolute values grows like e^{s*}; shells are needed up to
    // roughly s* / min(beta) past the peak.
    std::vector<double> b_nz;
    std::vector<double> c_nz;
    double beta_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        if (zs[i] != 0.0) {
            b_nz.push_back(p.betas[i]);
            c_nz.push_back(-zs[i]);
            beta_min = std::min(beta_min, p.betas[i]);
        }
    }
    const double s_star = detail::dominant_scale(b_nz, c_nz);
    const double shells_needed = 3.0 * s_star / beta_min + 40.0;
    // Number of multi-indices per shell grows like K^{m-1}.
    const double work = std::pow(shells_needed, static_cast<double>(b_nz.size()));
    bool series_ok = shells_needed < static_cast<double>(opt.max_shells) && work < 2e6;
    if (opt.multi_route == MultiRoute::contour) {
        return contour();
    }
    if (opt.multi_route == MultiRoute::series) {
        const auto q = detail::multishell_sum<detail::quad>(p.betas, p.lambda, zs, opt.tol,
                                                            opt.max_shells, 90.0);
        if (!q.converged) {
            throw NonConvergenceError("multivariate series: no convergence within " +
                                      std::to_string(opt.max_shells) + " shells");
        }
        return finish(q, detail::kQuadTermRelErr, true);
    }

    if (series_ok && s_star <= 4.0) {
        const auto d = detail::multishell_sum<double>(p.betas, p.lambda, zs, opt.tol,
                                                      opt.max_shells, 45.0);
        const double rel_d = 64.0 * detail::kEps;
        if (d.converged && rel_d * d.abs_sum <= detail::accept_target(opt.tol, d.value)) {
            return finish(d, rel_d, false);
        }
    }
    std::optional<EvalReport> via_contour;
    try {
        via_contour = contour();
        if (via_contour->est_abs_error <= detail::accept_target(opt.tol, via_contour->value)) {
            return *via_contour;
        }
    } catch (const NonConvergenceError&) {
        if (!series_ok) throw;
    }
    if (series_ok) {
        const auto q = detail::multishell_sum<detail::quad>(p.betas, p.lambda, zs, opt.tol,
                                                            opt.max_shells, 90.0);
        if (q.converged) {
            const EvalReport rep = finish(q, detail::kQuadTermRelErr, true);
            if (rep.est_abs_error <= detail::accept_target(opt.tol, rep.value)) return rep;
        }
    }
    if (via_contour &&
        via_contour->est_abs_error <= 1e3 * detail::accept_target(opt.tol, via_contour->value)) {
        return *via_contour;
    }
    throw NonConvergenceError("multivariate Mittag-Leffler: no route met the tolerance");
}

}  // namespace fracspec
