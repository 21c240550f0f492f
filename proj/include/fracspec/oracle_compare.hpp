#pragma once

// Mode-by-mode comparison of the closed-form spectral solution against the
// direct time stepper on a graded grid.

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracspec/caputo.hpp"
#include "fracspec/evolution.hpp"
#include "fracspec/parallel.hpp"

namespace fracspec {

struct OracleComparison {
    std::vector<double> mode_errors;  // max |closed form - stepper| over compared nodes
    double max_error = 0.0;
    std::size_t steps = 0;
    std::size_t compared_nodes = 0;
};

struct OracleCompareOptions {
    std::size_t steps = 4096;
    double t_end = 2.0;
    std::size_t stride = 1;  // compare at every stride-th node and at the last node
    MLOptions ml = propagator_options();
};

/// Scalar problem solved by mode m of p.
inline ScalarFODE mode_problem(const SpectralOperator& op, const EvolutionProblem& p, std::size_t m) {
    ScalarFODE s;
    s.orders.push_back(p.beta);
    s.weights.push_back(1.0);
    s.orders.insert(s.orders.end(), p.sub_orders.begin(), p.sub_orders.end());
    s.weights.insert(s.weights.end(), p.sub_weights.begin(), p.sub_weights.end());
    s.gamma = op.eigenvalue(m);
    s.u0 = p.w0.values[m];
    if (p.beta > 1.0) s.u1 = p.w1 ? p.w1->values[m] : 0.0;
    return s;
}

/// Closed-form amplitude of mode m at time t.
inline double mode_value(const SpectralOperator& op, const EvolutionProblem& p, std::size_t m, double t,
                         const MLOptions& opt = propagator_options()) {
    const double gamma = op.eigenvalue(m);
    const double w0 = p.w0.values[m];
    const double w1 = p.w1 ? p.w1->values[m] : 0.0;
    switch (p.kind) {
        case EvolutionKind::heat: return heat_mode(p.beta, gamma, t, opt) * w0;
        case EvolutionKind::wave: return wave_mode(p.beta, gamma, t, w0, w1, opt);
        default: return multiterm_mode(p.beta, p.sub_orders, p.sub_weights, gamma, t, w0, w1, opt);
    }
}

inline OracleComparison compare_with_stepper(const SpectralOperator& op, const EvolutionProblem& p,
                                             const OracleCompareOptions& o = {}) {
    p.validate(op);
    if (o.stride == 0) throw ParameterError("stride must be >= 1", "stride");
    if (is_multiterm(p.kind) && o.t_end > p.horizon) {
        throw ParameterError("comparison end time exceeds the horizon", "t_end");
    }
    const auto grid = TimeGrid::graded(o.t_end, o.steps, default_grading(p.beta));
    OracleComparison r;
    r.steps = o.steps;
    r.mode_errors.assign(op.size(), 0.0);
    std::vector<std::size_t> nodes;
    for (std::size_t j = 1; j < grid.size(); ++j) {
        if (j % o.stride == 0 || j + 1 == grid.size()) nodes.push_back(j);
    }
    r.compared_nodes = nodes.size();
    parallel_for(op.size(), [&](std::size_t m) {
        const auto path = solve_scalar_fode(mode_problem(op, p, m), grid);
        double e = 0.0;
        for (std::size_t j : nodes) {
            e = std::max(e, std::abs(path[j] - mode_value(op, p, m, grid[j], o.ml)));
        }
        r.mode_errors[m] = e;
    });
    r.max_error = *std::max_element(r.mode_errors.begin(), r.mode_errors.end());
    return r;
}

}  // namespace fracspec
