#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace fracspec {

/// Neumaier (improved Kahan) two-term accumulator.
///
/// Keeps a running correction for the low-order bits lost by each addition,
/// so that long alternating series keep their accuracy until the true
/// cancellation limit of the working precision.
template <typename T>
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(T init) : sum_(init) {}

    constexpr CompensatedSum& operator+=(T x) {
        const T t = sum_ + x;
        if (abs_(sum_) >= abs_(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    constexpr T value() const { return sum_ + comp_; }

private:
    static constexpr T abs_(T v) { return v < T(0) ? -v : v; }

    T sum_{0};
    T comp_{0};
};

template <typename T>
T compensated_sum(std::span<const T> xs) {
    CompensatedSum<T> acc;
    for (T x : xs) acc += x;
    return acc.value();
}

/// Sum of squares scaled against the largest magnitude to avoid overflow.
inline double scaled_norm2(std::span<const double> xs) {
    double scale = 0.0;
    for (double x : xs) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    CompensatedSum<double> acc;
    for (double x : xs) {
        const double r = x / scale;
        acc += r * r;
    }
    return scale * std::sqrt(acc.value());
}

}  // namespace fracspec
