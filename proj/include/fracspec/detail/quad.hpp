#pragma once

// Quad-precision (binary128) helpers for the series evaluators. Only the
// pieces the library needs: log-Gamma by Stirling with argument shift, and a
// sign/log-magnitude form of 1/Gamma valid on the whole real line.

#include <quadmath.h>

#include <array>
#include <cmath>
#include <limits>

namespace fracspec::detail {

using quad = __float128;

// 2^-112, the binary128 machine epsilon.
inline constexpr quad kQuadEps = quad(1) / (quad(1ULL << 56) * quad(1ULL << 56));
inline const quad kQuadPi = acosq(quad(-1));

inline quad q_abs(quad x) { return x < 0 ? -x : x; }

// Bernoulli numbers B_2 .. B_28 as exact rationals.
struct Rational {
    double num;
    double den;
};
inline constexpr std::array<Rational, 14> kBernoulli = {{
    {1.0, 6.0},
    {-1.0, 30.0},
    {1.0, 42.0},
    {-1.0, 30.0},
    {5.0, 66.0},
    {-691.0, 2730.0},
    {7.0, 6.0},
    {-3617.0, 510.0},
    {43867.0, 798.0},
    {-174611.0, 330.0},
    {854513.0, 138.0},
    {-236364091.0, 2730.0},
    {8553103.0, 6.0},
    {-23749461029.0, 870.0},
}};

// sin(pi x) in quad precision with exact reduction.
inline quad q_sinpi(quad x) {
    quad r = fmodq(x, 2);
    if (r > 1) r -= 2;
    if (r < -1) r += 2;
    if (r == 0 || r == 1 || r == -1) return 0;
    if (r > quad(0.5)) r = 1 - r;
    if (r < quad(-0.5)) r = -1 - r;
    return sinq(kQuadPi * r);
}

// log Gamma(x) for x > 0. Stirling series with 14 Bernoulli terms is accurate
// to well below binary128 epsilon once x >= 30; smaller arguments are shifted
// up with the recurrence Gamma(x) = Gamma(x + n) / (x (x+1) ... (x+n-1)).
inline quad q_log_gamma(quad x) {
    quad shift_log = 0;
    if (x < 30) {
        quad prod = 1;
        while (x < 30) {
            prod *= x;
            x += 1;
            if (prod > quad(1e300)) {
                shift_log += logq(prod);
                prod = 1;
            }
        }
        shift_log += logq(prod);
    }
    const quad inv = 1 / x;
    const quad inv2 = inv * inv;
    quad series = 0;
    quad pow_inv = inv;
    for (std::size_t n = 1; n <= kBernoulli.size(); ++n) {
        const quad b = quad(kBernoulli[n - 1].num) / quad(kBernoulli[n - 1].den);
        const quad two_n = quad(2 * n);
        series += b / (two_n * (two_n - 1)) * pow_inv;
        pow_inv *= inv2;
    }
    const quad half_log_2pi = quad(0.5) * logq(2 * kQuadPi);
    return (x - quad(0.5)) * logq(x) - x + half_log_2pi + series - shift_log;
}

struct QuadLogRecipGamma {
    quad log_abs;
    int sign;  // 0 at the poles of Gamma
};

// Sign and log-magnitude of 1/Gamma(x) for any real x.
inline QuadLogRecipGamma q_log_reciprocal_gamma(quad x) {
    if (x <= 0 && x == floorq(x)) return {-HUGE_VALQ, 0};
    if (x > 0) return {-q_log_gamma(x), 1};
    const quad s = q_sinpi(x);
    return {logq(q_abs(s)) + q_log_gamma(1 - x) - logq(kQuadPi), s > 0 ? 1 : -1};
}

}  // namespace fracspec::detail
