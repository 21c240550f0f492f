// Lp -> Lq smoothing of the fractional heat multiplier on the line, for
// self-similar and fixed Gaussian data.

#include <cstdio>

#include "fracspec/fracspec.hpp"

int main() {
    using namespace fracspec;
    std::printf("%6s %14s %10s %10s %10s\n", "alpha", "data", "slope", "predicted", "seam");
    for (double alpha : {0.5, 0.75, 1.0}) {
        for (auto scaling : {DataScaling::self_similar, DataScaling::fixed}) {
            LpLqStudy s;
            s.alpha = alpha;
            s.scaling = scaling;
            const auto r = run_lplq_study(s);
            std::printf("%6.2f %14s %10.4f %10.4f %10.1e\n", alpha, to_string(scaling), r.fit.fitted_slope,
                        r.predicted_slope, r.max_seam_ratio);
        }
    }
}
