#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "fracspec/evolution.hpp"
#include "fracspec/oracle_compare.hpp"
#include "oracle/ml_oracle.hpp"

using namespace fracspec;

namespace {

const double pi = std::numbers::pi;

double coeff_at(const std::vector<SolutionSnapshot>& s, std::size_t it, std::size_t m) {
    return s.at(it).coefficients.values.at(m);
}

// Scalar stepper run for one mode, value at the last node.
double stepper_value(const ScalarFODE& p, double t_end, std::size_t steps = 4096) {
    const auto grid = TimeGrid::graded(t_end, steps, default_grading(p.orders.front()));
    return solve_scalar_fode(p, grid).back();
}

SpectralCoefficients band_limited(const SpectralOperator& op, unsigned seed, std::size_t band) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpectralCoefficients c{std::vector<double>(op.size(), 0.0), op.label()};
    for (std::size_t m = 0; m < std::min(band, op.size()); ++m) c.values[m] = u(rng) / (1.0 + m);
    return c;
}

EvolutionProblem multi_problem(const SpectralOperator& op, double beta, std::vector<double> orders,
                               std::vector<double> weights, SpectralCoefficients w0,
                               std::optional<SpectralCoefficients> w1 = std::nullopt) {
    EvolutionProblem p;
    p.kind = beta > 1.0 ? EvolutionKind::multiterm_wave : EvolutionKind::multiterm_heat;
    p.beta = beta;
    p.sub_orders = std::move(orders);
    p.sub_weights = std::move(weights);
    p.w0 = std::move(w0);
    p.w1 = std::move(w1);
    return p;
}

}  // namespace

TEST(SolveHeat, ClassicalHeatMode) {
    const auto op = dirichlet_laplacian(pi, 4);
    const std::vector<double> t = {0.0, 1.0};
    const auto s = solve_heat(op, unit_coefficients(op, 0), 1.0, t);
    EXPECT_EQ(coeff_at(s, 0, 0), 1.0);
    EXPECT_NEAR(coeff_at(s, 1, 0), std::exp(-1.0), 1e-14);
    EXPECT_EQ(coeff_at(s, 1, 1), 0.0);
}

TEST(SolveHeat, ConstantModeInvariantOnPeriodic) {
    const auto op = periodic_laplacian(5);
    const std::vector<double> t = {0.0, 0.3, 7.0, 1e4};
    for (double beta : {0.2, 0.7, 1.0}) {
        const auto s = solve_heat(op, unit_coefficients(op, 0, 2.5), beta, t);
        for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(coeff_at(s, i, 0), 2.5);
    }
}

TEST(SolveHeat, HalfOrderMatchesErfcForm) {
    // E_{1/2}(-x) = exp(x^2) erfc(x)
    const auto op = dirichlet_laplacian(pi, 3);
    const std::vector<double> t = {2.0};
    const auto s = solve_heat(op, unit_coefficients(op, 0), 0.5, t);
    const double x = std::sqrt(2.0);
    EXPECT_NEAR(coeff_at(s, 0, 0), std::exp(x * x) * std::erfc(x), 1e-13);
}

TEST(SolveHeat, RejectsOrderOutsideRange) {
    const auto op = dirichlet_laplacian(pi, 3);
    const std::vector<double> t = {1.0};
    EXPECT_THROW(solve_heat(op, unit_coefficients(op, 0), 1.5, t), ParameterError);
    EXPECT_THROW(solve_heat(op, unit_coefficients(op, 0), 0.0, t), ParameterError);
    const std::vector<double> bad = {-1.0};
    EXPECT_THROW(solve_heat(op, unit_coefficients(op, 0), 0.5, bad), ParameterError);
}

TEST(SolveHeat, SnapshotNormsRecomputable) {
    const auto op = dirichlet_laplacian(pi, 12);
    const auto w0 = band_limited(op, 7, 12);
    const std::vector<double> t = {0.0, 0.1, 1.0, 10.0};
    const auto s = solve_heat(op, w0, 0.6, t, {0.0, 1.0, 2.0});
    for (const auto& snap : s) {
        EXPECT_NEAR(snap.l2_norm, sobolev_norm(op, snap.coefficients, {0.0}), 1e-12 * snap.l2_norm);
        for (double d : {1.0, 2.0}) {
            const double ref = sobolev_norm(op, snap.coefficients, {d});
            EXPECT_NEAR(snap.sobolev_norms.at(d), ref, 1e-12 * ref);
        }
    }
    EXPECT_EQ(s[0].coefficients.values, w0.values);
}

TEST(SolveHeat, MonotoneL2DecayWithoutZeroEigenvalue) {
    const auto op = dirichlet_laplacian(pi, 16);
    const auto w0 = band_limited(op, 11, 16);
    const auto t = log_times(1e-2, 1e4, 20);
    for (double beta : {0.3, 0.8, 1.0}) {
        const auto s = solve_heat(op, w0, beta, t);
        for (std::size_t i = 1; i < s.size(); ++i) {
            EXPECT_LE(s[i].l2_norm, s[i - 1].l2_norm) << "beta=" << beta << " t=" << s[i].t;
        }
    }
}

TEST(SolveHeat, LinearInInitialData) {
    const auto op = harmonic_oscillator(10);
    const auto a = band_limited(op, 1, 10);
    const auto b = band_limited(op, 2, 10);
    SpectralCoefficients c{std::vector<double>(op.size()), op.label()};
    for (std::size_t m = 0; m < op.size(); ++m) c.values[m] = 2.0 * a.values[m] - 3.0 * b.values[m];
    const std::vector<double> t = {0.05, 0.5, 5.0};
    const auto sa = solve_heat(op, a, 0.4, t);
    const auto sb = solve_heat(op, b, 0.4, t);
    const auto sc = solve_heat(op, c, 0.4, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t m = 0; m < op.size(); ++m) {
            const double ref = 2.0 * coeff_at(sa, i, m) - 3.0 * coeff_at(sb, i, m);
            EXPECT_NEAR(coeff_at(sc, i, m), ref, 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST(SolveHeat, IndependentOfWorkerCount) {
    const auto op = dirichlet_laplacian(pi, 8);
    const auto w0 = band_limited(op, 3, 8);
    const auto t = log_times(1e-2, 1e2, 5);
    const char* prev = std::getenv("FRACSPEC_THREADS");
    const std::string saved = prev ? prev : "";
    setenv("FRACSPEC_THREADS", "1", 1);
    const auto serial = solve_heat(op, w0, 0.7, t);
    setenv("FRACSPEC_THREADS", "4", 1);
    const auto parallel = solve_heat(op, w0, 0.7, t);
    if (prev) setenv("FRACSPEC_THREADS", saved.c_str(), 1);
    else unsetenv("FRACSPEC_THREADS");
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(serial[i].coefficients.values, parallel[i].coefficients.values);
        EXPECT_EQ(serial[i].l2_norm, parallel[i].l2_norm);
    }
}

TEST(SolveWave, InitialDataAtZero) {
    const auto op = dirichlet_laplacian(pi, 4);
    const auto w0 = band_limited(op, 5, 4);
    const SpectralCoefficients w1{std::vector<double>(4, 0.0), op.label()};
    const std::vector<double> t = {0.0};
    const auto s = solve_wave(op, w0, w1, 1.5, t);
    EXPECT_EQ(s[0].coefficients.values, w0.values);
}

TEST(SolveWave, VelocityDrivenModeAgainstSeriesAndStepper) {
    const auto op = dirichlet_laplacian(pi, 4);
    const SpectralCoefficients w0{std::vector<double>(4, 0.0), op.label()};
    const auto w1 = unit_coefficients(op, 1);
    const std::vector<double> t = {0.7};
    const auto s = solve_wave(op, w0, w1, 1.5, t);
    const double ref = 0.7 * oracle::ml_series(1.5, 2.0, -4.0 * std::pow(0.7, 1.5));
    EXPECT_NEAR(coeff_at(s, 0, 1), ref, 1e-12);

    ScalarFODE p;
    p.orders = {1.5};
    p.weights = {1.0};
    p.gamma = 4.0;
    p.u0 = 0.0;
    p.u1 = 1.0;
    EXPECT_NEAR(stepper_value(p, 0.7), coeff_at(s, 0, 1), 5e-4);
}

TEST(SolveWave, SecondOrderLimitIsCosine) {
    // E_2(-4 t^2) = cos(2t); checked on the special function only
    for (double t : {0.1, 0.7, 2.0, 5.0}) {
        EXPECT_NEAR(ml_one(2.0, -4.0 * t * t).value, std::cos(2.0 * t), 1e-10);
    }
}

TEST(SolveWave, RejectsOrderOutsideRange) {
    const auto op = dirichlet_laplacian(pi, 3);
    const auto w = unit_coefficients(op, 0);
    const std::vector<double> t = {1.0};
    EXPECT_THROW(solve_wave(op, w, w, 0.9, t), ParameterError);
    EXPECT_THROW(solve_wave(op, w, w, 2.0, t), ParameterError);
    EvolutionProblem p;
    p.kind = EvolutionKind::wave;
    p.beta = 1.5;
    p.w0 = w;
    try {
        solve(op, p, t);
        FAIL() << "missing w1 accepted";
    } catch (const ParameterError& e) {
        EXPECT_EQ(e.field(), "w1");
    }
}

TEST(SolveWave, OneSidedDifferenceRecoversVelocity) {
    const auto op = dirichlet_laplacian(pi, 8);
    const auto w0 = band_limited(op, 21, 8);
    const auto w1 = band_limited(op, 22, 8);
    for (double beta : {1.2, 1.5, 1.8}) {
        const double e2 = initial_velocity_error(op, w0, w1, beta, 1e-2);
        const double e3 = initial_velocity_error(op, w0, w1, beta, 1e-3);
        const double rate = std::log10(e2 / e3);
        EXPECT_GE(rate, std::min(1.0, beta - 1.0) - 0.05) << "beta=" << beta;
        EXPECT_LT(e3, e2);
    }
}

TEST(SolveWave, LinearInInitialData) {
    const auto op = dirichlet_laplacian(2.0, 6);
    const auto a0 = band_limited(op, 1, 6);
    const auto a1 = band_limited(op, 2, 6);
    const auto b0 = band_limited(op, 3, 6);
    const auto b1 = band_limited(op, 4, 6);
    SpectralCoefficients c0 = a0;
    SpectralCoefficients c1 = a1;
    for (std::size_t m = 0; m < op.size(); ++m) {
        c0.values[m] += b0.values[m];
        c1.values[m] += b1.values[m];
    }
    const std::vector<double> t = {0.2, 3.0};
    const auto sa = solve_wave(op, a0, a1, 1.3, t);
    const auto sb = solve_wave(op, b0, b1, 1.3, t);
    const auto sc = solve_wave(op, c0, c1, 1.3, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t m = 0; m < op.size(); ++m) {
            const double ref = coeff_at(sa, i, m) + coeff_at(sb, i, m);
            EXPECT_NEAR(coeff_at(sc, i, m), ref, 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST(SolveMultiterm, ZeroWeightsReduceToSingleTerm) {
    const auto op = dirichlet_laplacian(pi, 4);
    const auto w0 = band_limited(op, 8, 4);
    const auto w1 = band_limited(op, 9, 4);
    const std::vector<double> t = {0.0, 0.01, 0.4, 2.0, 9.5};
    {
        const auto p = multi_problem(op, 0.7, {0.5, 0.2}, {0.0, 0.0}, w0);
        const auto a = solve_multiterm(op, p, t);
        const auto b = solve_heat(op, w0, 0.7, t);
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (std::size_t m = 0; m < 4; ++m) EXPECT_NEAR(coeff_at(a, i, m), coeff_at(b, i, m), 1e-9);
        }
    }
    {
        const auto p = multi_problem(op, 1.6, {1.3, 0.6}, {0.0, 0.0}, w0, w1);
        const auto a = solve_multiterm(op, p, t);
        const auto b = solve_wave(op, w0, w1, 1.6, t);
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (std::size_t m = 0; m < 4; ++m) EXPECT_NEAR(coeff_at(a, i, m), coeff_at(b, i, m), 1e-9);
        }
    }
}

TEST(SolveMultiterm, HalfOrderDampingOnZeroEigenvalue) {
    // u' + D^{1/2} u = 0, u(0) = 1 on the constant mode
    const auto op = periodic_laplacian(3);
    const auto p = multi_problem(op, 1.0, {0.5}, {1.0}, unit_coefficients(op, 0));
    const std::vector<double> t = {1.0};
    const double closed = coeff_at(solve_multiterm(op, p, t), 0, 0);
    EXPECT_NEAR(closed, stepper_value(mode_problem(op, p, 0), 1.0), 5e-4);
}

TEST(SolveMultiterm, TwoSubOrderWaveMode) {
    const auto op = dirichlet_laplacian(pi, 1);
    auto p = multi_problem(op, 1.8, {1.2, 0.4}, {0.5, 0.3}, unit_coefficients(op, 0),
                           SpectralCoefficients{{0.0}, op.label()});
    const std::vector<double> t = {0.5};
    const double closed = coeff_at(solve_multiterm(op, p, t), 0, 0);
    EXPECT_NEAR(closed, stepper_value(mode_problem(op, p, 0), 0.5), 1e-3);
    EXPECT_NEAR(closed, 0.86369846971713282, 1e-12);
}

TEST(SolveMultiterm, StartsFromInitialData) {
    const auto op = dirichlet_laplacian(pi, 4);
    const auto w0 = band_limited(op, 12, 4);
    const auto p = multi_problem(op, 0.9, {0.4}, {2.0}, w0);
    const std::vector<double> t = {0.0};
    EXPECT_EQ(solve_multiterm(op, p, t)[0].coefficients.values, w0.values);
}

TEST(SolveMultiterm, RejectsInvalidOrderChains) {
    const auto op = dirichlet_laplacian(pi, 2);
    const auto w0 = unit_coefficients(op, 0);
    const std::vector<double> t = {1.0};
    EXPECT_THROW(solve_multiterm(op, multi_problem(op, 0.8, {0.3, 0.5}, {1.0, 1.0}, w0), t), ParameterError);
    EXPECT_THROW(solve_multiterm(op, multi_problem(op, 0.8, {0.9}, {1.0}, w0), t), ParameterError);
    EXPECT_THROW(solve_multiterm(op, multi_problem(op, 0.8, {0.3}, {-1.0}, w0), t), ParameterError);
    EXPECT_THROW(solve_multiterm(op, multi_problem(op, 0.8, {0.3}, {1.0, 2.0}, w0), t), ParameterError);
    auto p = multi_problem(op, 0.8, {0.3}, {1.0}, w0);
    const std::vector<double> late = {11.0};
    EXPECT_THROW(solve_multiterm(op, p, late), ParameterError);
    p.horizon = 20.0;
    EXPECT_NO_THROW(solve_multiterm(op, p, late));
}

TEST(TimeDerivative, ClassicalHeat) {
    const auto op = dirichlet_laplacian(pi, 3);
    const std::vector<double> t = {0.0, 0.5, 2.0};
    const auto s = heat_time_derivative(op, unit_coefficients(op, 2), 1.0, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(coeff_at(s, i, 2), -9.0 * std::exp(-9.0 * t[i]), 1e-13);
    }
}

TEST(TimeDerivative, VanishesOnZeroEigenvalue) {
    const auto op = periodic_laplacian(3);
    const std::vector<double> t = {0.3, 4.0};
    const auto s = heat_time_derivative(op, unit_coefficients(op, 0), 0.6, t);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(coeff_at(s, i, 0), 0.0);
}

TEST(TimeDerivative, MatchesCentralDifference) {
    // gamma = 2 mode: dirichlet on (0, pi / sqrt 2)
    const auto op = dirichlet_laplacian(pi / std::sqrt(2.0), 1);
    ASSERT_NEAR(op.eigenvalue(0), 2.0, 1e-14);
    const auto w0 = unit_coefficients(op, 0);
    const double h = 1e-4;
    const std::vector<double> t = {0.5 - h, 0.5, 0.5 + h};
    const auto u = solve_heat(op, w0, 0.7, t);
    const auto d = heat_time_derivative(op, w0, 0.7, t);
    const double fd = (coeff_at(u, 2, 0) - coeff_at(u, 0, 0)) / (2.0 * h);
    EXPECT_NEAR(coeff_at(d, 1, 0), fd, 1e-5);
}

TEST(TimeDerivative, SingularAtZeroForFractionalOrder) {
    const auto op = dirichlet_laplacian(pi, 2);
    const std::vector<double> t = {0.0, 1.0};
    EXPECT_THROW(heat_time_derivative(op, unit_coefficients(op, 0), 0.5, t), DomainError);
}

TEST(TimeDerivative, WaveVelocityAtZeroAndDifference) {
    const auto op = dirichlet_laplacian(pi, 3);
    const auto w0 = band_limited(op, 31, 3);
    const auto w1 = band_limited(op, 32, 3);
    const double h = 1e-4;
    const std::vector<double> t = {0.0, 0.8 - h, 0.8, 0.8 + h};
    const auto u = solve_wave(op, w0, w1, 1.4, t);
    const auto d = wave_time_derivative(op, w0, w1, 1.4, t);
    EXPECT_EQ(d[0].coefficients.values, w1.values);
    for (std::size_t m = 0; m < 3; ++m) {
        const double fd = (coeff_at(u, 3, m) - coeff_at(u, 1, m)) / (2.0 * h);
        EXPECT_NEAR(coeff_at(d, 2, m), fd, 1e-6);
    }
}

TEST(DecayBound, ShapesAtKnownPoints) {
    DataNorms n;
    n.w0 = 3.0;
    n.w1 = 0.5;
    n.w0_minus_2 = 0.25;
    n.w1_minus_2_over_beta = 0.2;
    n.w1_minus_2 = 0.1;
    BoundShape heat{EstimateId::heat_2, 0.6, {}, {}};
    EXPECT_EQ(decay_bound(heat, n, 0.0), 3.0);
    EXPECT_NEAR(decay_bound(heat, n, 4.0), 3.0 / (1.0 + std::pow(4.0, 0.6)), 1e-15);
    heat.id = EstimateId::heat_1;
    for (double t : {0.0, 1.0, 1e6}) EXPECT_EQ(decay_bound(heat, n, t), 3.0);
    heat.id = EstimateId::heat_3;
    EXPECT_NEAR(decay_bound(heat, n, 2.0), (1.0 + std::pow(2.0, -0.6)) * 0.25, 1e-15);
    BoundShape wave{EstimateId::wave_1, 1.5, {}, {}};
    EXPECT_EQ(decay_bound(wave, n, 2.0), 3.0 + 2.0 * 0.5);
    wave.id = EstimateId::wave_3;
    EXPECT_NEAR(decay_bound(wave, n, 2.0), 3.0 + 3.0 * 0.2, 1e-15);
    BoundShape multi{EstimateId::multi_heat_2, 0.8, {0.5, 0.2}, {0.7, 0.4}};
    const double pre = 1.0 + 0.7 * std::pow(2.0, 0.3) + 0.4 * std::pow(2.0, 0.6);
    EXPECT_NEAR(decay_bound(multi, n, 2.0), pre * 3.0 / (1.0 + std::pow(2.0, 0.8)), 1e-14);
}

TEST(DecayBound, MissingNormNamesField) {
    DataNorms n;
    n.w0 = 1.0;
    try {
        decay_bound({EstimateId::heat_3, 0.5, {}, {}}, n, 1.0);
        FAIL() << "missing norm accepted";
    } catch (const ParameterError& e) {
        EXPECT_EQ(e.field(), "w0_minus_2");
    }
}

TEST(DecayBound, EstimateIdsRoundTrip) {
    for (EstimateId id : kAllEstimates) EXPECT_EQ(parse_estimate(to_string(id)), id);
    EXPECT_THROW(parse_estimate("heat-4"), UnknownEstimateError);
}

TEST(VerifyDecay, SingleModeSlopeIsMinusBeta) {
    const auto op = dirichlet_laplacian(pi, 4);
    const auto w0 = unit_coefficients(op, 0);
    const auto t = log_times(10.0, 1e4);
    for (double beta : {0.3, 0.5, 0.8}) {
        const auto s = solve_heat(op, w0, beta, t);
        const auto norms = data_norms(op, w0, std::nullopt, 0.0, beta);
        const auto r = verify_decay(op, s, {EstimateId::heat_2, beta, {}, {}}, {0.0}, norms);
        EXPECT_NEAR(r.fitted_slope, -beta, 0.05) << "beta=" << beta;
        EXPECT_GE(r.slope_stderr, 0.0);
        EXPECT_EQ(r.times.size(), r.norms.size());
    }
}

TEST(VerifyDecay, ConstantModeHasZeroSlope) {
    const auto op = periodic_laplacian(5);
    const auto w0 = unit_coefficients(op, 0);
    const auto t = log_times(1e-2, 1e4);
    const auto s = solve_heat(op, w0, 0.5, t);
    const auto r = verify_decay(op, s, {EstimateId::heat_1, 0.5, {}, {}}, {0.0},
                                data_norms(op, w0, std::nullopt, 0.0, 0.5));
    EXPECT_NEAR(r.fitted_slope, 0.0, 0.01);
    EXPECT_NEAR(r.bound_constant_estimate, 1.0, 1e-12);
}

TEST(VerifyDecay, WaveSupRatioFiniteForRandomData) {
    const auto op = dirichlet_laplacian(pi, 16);
    const auto w0 = band_limited(op, 41, 16);
    const auto w1 = band_limited(op, 42, 16);
    auto t = log_times(1e-2, 1e3, 20);
    t.insert(t.begin(), 0.0);
    const auto s = solve_wave(op, w0, w1, 1.5, t);
    const auto r = verify_decay(op, s, {EstimateId::wave_2, 1.5, {}, {}}, {0.0},
                                data_norms(op, w0, w1, 0.0, 1.5));
    EXPECT_TRUE(std::isfinite(r.bound_constant_estimate));
    EXPECT_GT(r.bound_constant_estimate, 0.0);
}

TEST(VerifyDecay, HeatSupNearSlowestTimeScale) {
    // gamma_min = (pi / 10)^2; for beta = 1 the ratio e^{-g t}(1 + t) peaks at t = 1/g - 1
    const auto op = dirichlet_laplacian(10.0, 4);
    const auto w0 = unit_coefficients(op, 0);
    const double g = op.eigenvalue(0);
    const auto t = log_times(1e-2, 1e4);
    const auto s = solve_heat(op, w0, 1.0, t);
    const auto r = verify_decay(op, s, {EstimateId::heat_2, 1.0, {}, {}}, {0.0},
                                data_norms(op, w0, std::nullopt, 0.0, 1.0));
    EXPECT_GT(r.sup_time, 0.5 / g);
    EXPECT_LT(r.sup_time, 2.0 / g);
}

TEST(VerifyDecay, EveryEstimateHasFiniteSupRatio) {
    const auto op = dirichlet_laplacian(pi, 12);
    const auto w0 = band_limited(op, 51, 12);
    const auto w1 = band_limited(op, 52, 12);
    const auto t_long = log_times(1e-2, 1e4, 10);
    const auto t_short = log_times(1e-2, 10.0, 10);
    const double delta = 1.0;
    const std::vector<double> orders_heat = {0.5, 0.2};
    const std::vector<double> orders_wave = {1.1, 0.5};
    const std::vector<double> weights = {0.7, 0.4};
    const auto heat = solve_heat(op, w0, 0.6, t_long);
    const auto wave = solve_wave(op, w0, w1, 1.5, t_long);
    const auto mheat = solve_multiterm(op, multi_problem(op, 0.8, orders_heat, weights, w0), t_short);
    const auto mwave = solve_multiterm(op, multi_problem(op, 1.6, orders_wave, weights, w0, w1), t_short);
    for (EstimateId id : kAllEstimates) {
        const bool multi = is_multiterm(id);
        const bool wave_like = base_shape(id) >= EstimateId::wave_1;
        const double beta = multi ? (wave_like ? 1.6 : 0.8) : (wave_like ? 1.5 : 0.6);
        BoundShape shape{id, beta, {}, {}};
        if (multi) {
            shape.sub_orders = wave_like ? orders_wave : orders_heat;
            shape.sub_weights = weights;
        }
        const auto& snaps = multi ? (wave_like ? mwave : mheat) : (wave_like ? wave : heat);
        const auto norms = data_norms(op, w0, wave_like ? std::optional(w1) : std::nullopt, delta, beta);
        const auto r = verify_decay(op, snaps, shape, {delta}, norms);
        EXPECT_TRUE(std::isfinite(r.bound_constant_estimate)) << to_string(id);
        EXPECT_GT(r.bound_constant_estimate, 0.0) << to_string(id);
    }
}

TEST(VerifyDecay, RejectsShortSeries) {
    const auto op = dirichlet_laplacian(pi, 2);
    const auto w0 = unit_coefficients(op, 0);
    const std::vector<double> few = {1.0, 2.0, 3.0, 4.0};
    const auto s = solve_heat(op, w0, 0.5, few);
    const auto norms = data_norms(op, w0, std::nullopt, 0.0, 0.5);
    EXPECT_THROW(verify_decay(op, s, {EstimateId::heat_2, 0.5, {}, {}}, {0.0}, norms), InsufficientSamplesError);
    const std::vector<double> narrow = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const auto s2 = solve_heat(op, w0, 0.5, narrow);
    EXPECT_THROW(verify_decay(op, s2, {EstimateId::heat_2, 0.5, {}, {}}, {0.0}, norms), InsufficientSamplesError);
}

TEST(OracleCompare, HeatModesAgreeWithStepper) {
    const auto op = dirichlet_laplacian(pi, 4);
    EvolutionProblem p;
    p.beta = 0.5;
    p.w0 = SpectralCoefficients{{1.0, 1.0, 1.0, 1.0}, op.label()};
    OracleCompareOptions o;
    o.steps = 1024;
    o.stride = 8;
    const auto r = compare_with_stepper(op, p, o);
    EXPECT_EQ(r.mode_errors.size(), 4u);
    EXPECT_LE(r.max_error, 5e-4);
}

TEST(OracleCompare, WaveModesAgreeWithStepper) {
    const auto op = dirichlet_laplacian(pi, 4);
    EvolutionProblem p;
    p.kind = EvolutionKind::wave;
    p.beta = 1.5;
    p.w0 = SpectralCoefficients{{1.0, 1.0, 1.0, 1.0}, op.label()};
    p.w1 = SpectralCoefficients{{1.0, -1.0, 0.5, 0.0}, op.label()};
    OracleCompareOptions o;
    o.steps = 1024;
    o.stride = 8;
    EXPECT_LE(compare_with_stepper(op, p, o).max_error, 5e-4);
}
