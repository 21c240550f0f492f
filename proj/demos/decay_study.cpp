// Heat decay on the Dirichlet Laplacian of (0, pi): the H^delta norm against the
// (1 + t^beta)^{-1} shape, and the fitted large-time slope.

#include <cstdio>
#include <vector>

#include "fracspec/fracspec.hpp"

int main() {
    using namespace fracspec;
    const auto op = dirichlet_laplacian(std::numbers::pi, 32);
    const auto g = op.default_grid();
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = g.x[i] * (std::numbers::pi - g.x[i]);
    const auto w0 = analyze(op, g, f);
    const auto t = log_times(1e-2, 1e4, 20);

    std::printf("%5s %10s %10s %10s %10s\n", "beta", "delta", "sup", "sup_t", "slope");
    for (double beta : {0.25, 0.5, 0.75, 1.0}) {
        const auto snaps = solve_heat(op, w0, beta, t, {0.0, 1.0});
        for (double delta : {0.0, 1.0}) {
            const auto norms = data_norms(op, w0, std::nullopt, delta, beta);
            const auto r = verify_decay(op, snaps, {EstimateId::heat_2, beta, {}, {}}, {delta}, norms, {10.0, 1e4});
            std::printf("%5.2f %10.1f %10.4f %10.3g %10.4f\n", beta, delta, r.bound_constant_estimate, r.sup_time,
                        r.fitted_slope);
        }
    }
    // nan slope at beta = 1: the norm underflows like exp(-t)
}
