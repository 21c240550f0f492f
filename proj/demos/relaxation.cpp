// Fractional relaxation D^beta u = -u, u(0) = 1: closed form E_beta(-t^beta) next to
// the graded-grid stepper, for a few orders.

#include <cmath>
#include <cstdio>
#include <vector>

#include "fracspec/fracspec.hpp"

int main() {
    using namespace fracspec;
    const std::vector<double> betas = {0.3, 0.6, 0.9, 1.0};
    const std::size_t steps = 2048;
    std::printf("%6s", "t");
    for (double b : betas) std::printf("   E_%.1f(-t^b)   stepper     ", b);
    std::printf("\n");

    std::vector<std::vector<double>> paths;
    std::vector<TimeGrid> grids;
    for (double b : betas) {
        ScalarFODE p;
        p.orders = {b};
        p.weights = {1.0};
        p.gamma = 1.0;
        p.u0 = 1.0;
        grids.push_back(TimeGrid::graded(4.0, steps, default_grading(b)));
        paths.push_back(solve_scalar_fode(p, grids.back()));
    }
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        std::printf("%6.2f", t);
        for (std::size_t i = 0; i < betas.size(); ++i) {
            // nearest grid node
            std::size_t j = 0;
            for (std::size_t k = 0; k < grids[i].size(); ++k) {
                if (std::abs(grids[i][k] - t) < std::abs(grids[i][j] - t)) j = k;
            }
            const double tj = grids[i][j];
            std::printf("   %.8f  %.8f", ml_one(betas[i], -std::pow(tj, betas[i])).value, paths[i][j]);
        }
        std::printf("\n");
    }
    // slow algebraic tail for beta < 1
    std::printf("\nE_beta(-t^beta) * t^beta * Gamma(1-beta) at t = 1e4:");
    for (double b : {0.3, 0.6, 0.9}) {
        std::printf("  %.4f", ml_one(b, -std::pow(1e4, b)).value * std::pow(1e4, b) * std::tgamma(1.0 - b));
    }
    std::printf("\n");
}
