#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracspec/mittag_leffler.hpp"
#include "oracle/ml_oracle.hpp"

namespace fs = fracspec;

namespace {

double scaled_err(double got, double ref) {
    return std::abs(got - ref) / std::max(1.0, std::abs(ref));
}

}  // namespace

TEST(MlTwo, ExponentialIdentity) {
    for (double z = -30.0; z <= 30.0; z += 0.37) {
        const double ref = std::exp(z);
        EXPECT_LE(std::abs(fs::ml_one(1.0, z).value - ref), 1e-12 * std::max(1.0, ref)) << z;
    }
    EXPECT_NEAR(fs::ml_two({1.0, 1.0}, -2.0).value, 0.1353352832366127, 1e-15);
    EXPECT_NEAR(fs::ml_one(1.0, -1.0).value, 0.36787944117144233, 1e-15);
}

TEST(MlTwo, CosineIdentity) {
    EXPECT_NEAR(fs::ml_one(2.0, -1.0).value, 0.5403023058681398, 1e-14);
    for (double t : {0.3, 2.0, 4.5}) {
        EXPECT_NEAR(fs::ml_one(2.0, -t * t).value, std::cos(t), 1e-12) << t;
    }
}

TEST(MlTwo, ZeroArgument) {
    for (double rho : {0.5, 1.0, 1.5, 2.5, -0.5}) {
        const auto r = fs::ml_two({0.7, rho}, 0.0);
        EXPECT_DOUBLE_EQ(r.value, fs::reciprocal_gamma(rho));
        EXPECT_GE(r.terms_used, 1u);
    }
    EXPECT_EQ(fs::ml_two({0.7, -1.0}, 0.0).value, 0.0);
}

TEST(MlTwo, ErfcClosedForm) {
    // E_{1/2}(-x) = e^{x^2} erfc(x); frozen 20-digit references.
    EXPECT_NEAR(fs::ml_one(0.5, -1.0).value, 0.42758357615580700441, 1e-14);
    EXPECT_NEAR(fs::ml_one(0.5, -4.0).value, 0.13699945762506138989, 1e-14);
    for (double x : {0.5, 2.0, 3.0}) {
        EXPECT_NEAR(fs::ml_one(0.5, -x).value, std::exp(x * x) * std::erfc(x), 1e-13) << x;
    }
}

TEST(MlTwo, AgreesWithSeriesOracle) {
    double worst = 0.0;
    for (double alpha : {0.35, 0.8, 1.25, 1.75}) {
        for (double rho : {0.5, 1.0, 1.7}) {
            for (double z : {-25.0, -9.5, -3.0, -0.4, 0.9, 4.0}) {
                const double ref = oracle::ml_reference(alpha, rho, z);
                const double got = fs::ml_two({alpha, rho}, z).value;
                worst = std::max(worst, scaled_err(got, ref));
            }
        }
    }
    EXPECT_LT(worst, 1e-11);
}

TEST(MlTwo, OraclesAgreeOnOverlap) {
    // Series in MPFR against the real-line integral where both apply.
    for (double alpha : {0.2, 0.5, 0.9}) {
        for (double rho : {0.5, 1.0, 1.6}) {
            for (double scaled : {2.0, 10.0, 40.0}) {
                const double s = std::pow(scaled, alpha);
                const double a = oracle::ml_series(alpha, rho, -s);
                const double b = oracle::ml_integral(alpha, rho, s);
                EXPECT_NEAR(a, b, 1e-13) << alpha << " " << rho << " " << s;
            }
        }
    }
}

TEST(MlTwo, ErrorEstimateIsHonest) {
    for (double alpha : {0.3, 0.9, 1.5}) {
        for (double z : {-20.0, -5.0, -1.0, 2.0}) {
            const auto r = fs::ml_two({alpha, 1.0}, z);
            const double ref = oracle::ml_reference(alpha, 1.0, z);
            EXPECT_GE(r.est_abs_error, 0.0);
            EXPECT_LE(r.est_abs_error, 1e-12 * std::max(1.0, std::abs(r.value)));
            EXPECT_LE(std::abs(r.value - ref), 10.0 * r.est_abs_error + 1e-15);
        }
    }
}

TEST(MlTwo, MethodSelection) {
    EXPECT_EQ(fs::ml_one(0.5, -0.5).method, fs::MLMethod::taylor_series);
    EXPECT_FALSE(fs::ml_one(0.5, -0.5).extended_precision);
    EXPECT_EQ(fs::ml_one(0.5, -1e4).method, fs::MLMethod::asymptotic_expansion);
    EXPECT_EQ(fs::ml_one(1.5, -1e6).method, fs::MLMethod::asymptotic_expansion);
}

TEST(MlTwo, ParameterErrors) {
    EXPECT_THROW(fs::ml_two({0.0, 1.0}, -1.0), fs::ParameterError);
    EXPECT_THROW(fs::ml_two({-1.0, 1.0}, -1.0), fs::ParameterError);
    EXPECT_THROW(fs::ml_two({0.5, 1.0}, -2e8), fs::ParameterError);
    EXPECT_THROW(fs::ml_two({0.5, 1.0}, NAN), fs::ParameterError);
    try {
        fs::ml_two({0.0, 1.0}, -1.0);
    } catch (const fs::ParameterError& e) {
        EXPECT_EQ(e.field(), "alpha");
    }
    EXPECT_THROW(fs::ml_two({0.1, 1.0}, 5.0), fs::OverflowError);
}

TEST(MlTwo, LargeArgumentSlope) {
    // E_a(-s) ~ s^{-1} / Gamma(1 - a) for 0 < a < 1.
    for (double alpha : {0.2, 0.5, 0.8}) {
        const double s0 = 1e3;
        const double s1 = 1e6;
        const double slope = (std::log(fs::ml_one(alpha, -s1).value) -
                              std::log(fs::ml_one(alpha, -s0).value)) /
                             (std::log(s1) - std::log(s0));
        EXPECT_NEAR(slope, -1.0, 0.02) << alpha;
        EXPECT_NEAR(fs::ml_one(alpha, -s1).value * s1 * std::tgamma(1.0 - alpha), 1.0, 1e-3);
    }
}

TEST(MlTwo, CompletelyMonotoneDecrease) {
    for (double alpha : {0.1, 0.45, 0.75, 0.95}) {
        double prev = fs::ml_one(alpha, -1e-6).value;
        for (int i = 1; i <= 120; ++i) {
            const double s = 1e-6 * std::pow(10.0, 12.0 * i / 120.0);
            const double cur = fs::ml_one(alpha, -s).value;
            EXPECT_LT(cur, prev) << alpha << " " << s;
            prev = cur;
        }
    }
}

TEST(BoundCheckOne, Examples) {
    EXPECT_TRUE(fs::bound_check_one(0.5, 1.0));
    EXPECT_TRUE(fs::bound_check_one(0.9, 1e-8));
    EXPECT_TRUE(fs::bound_check_one(0.3, 500.0));
    EXPECT_THROW(fs::bound_check_one(1.0, 1.0), fs::ParameterError);
    EXPECT_THROW(fs::bound_check_one(0.5, 0.0), fs::ParameterError);
}

TEST(BoundCheckOne, HoldsOnLogGrid) {
    for (int ia = 1; ia < 20; ++ia) {
        const double alpha = 0.05 * ia;
        for (int is = 0; is < 50; ++is) {
            const double s = 1e-6 * std::pow(1e12, is / 49.0);
            EXPECT_TRUE(fs::bound_check_one(alpha, s)) << alpha << " " << s;
        }
    }
}

TEST(BoundCheckOne, ConstantIsSharpAtOrigin) {
    // Both sides share the slope -1/Gamma(1+a) at s = 0, so the gap is o(s).
    for (double alpha : {0.3, 0.7}) {
        const double s = 1e-4;
        const double lhs = fs::ml_one(alpha, -s).value;
        const double rhs = 1.0 / (1.0 + s / std::tgamma(1.0 + alpha));
        EXPECT_LT(rhs - lhs, 1e-6);
    }
}

TEST(BoundMarginTwo, ExamplesAndBoundedness) {
    EXPECT_NEAR(fs::bound_margin_two({1.0, 1.0}, 1.0), 0.7357588823428847, 1e-15);
    EXPECT_NEAR(fs::bound_margin_two({0.5, 1.0}, 1e-12), 1.0, 1e-6);
    EXPECT_NEAR(fs::bound_margin_two({0.8, 1.5}, 100.0), 0.77902218469822207852, 1e-12);
    EXPECT_THROW(fs::bound_margin_two({0.5, 2.0}, 1.0), fs::ParameterError);
    for (double nu : {0.3, 0.9, 1.4, 1.9}) {
        for (double rho : {0.5, 1.0, 1.9}) {
            double sup = 0.0;
            for (int i = 0; i <= 60; ++i) {
                const double s = 1e-3 * std::pow(1e9, i / 60.0);
                sup = std::max(sup, std::abs(fs::bound_margin_two({nu, rho}, s)));
            }
            EXPECT_TRUE(std::isfinite(sup)) << nu << " " << rho;
            // (1+s) E(-s) -> 1/Gamma(rho - nu) as s grows.
            const double tail = fs::bound_margin_two({nu, rho}, 1e7);
            EXPECT_NEAR(tail, fs::reciprocal_gamma(rho - nu), 1e-3) << nu << " " << rho;
        }
    }
}

TEST(HeatDerivativeKernel, Examples) {
    EXPECT_NEAR(fs::heat_derivative_kernel(1.0, 1.0, 1.0), -0.36787944117144233, 1e-15);
    EXPECT_EQ(fs::heat_derivative_kernel(0.6, 0.0, 2.0), 0.0);
    // Central difference of E_a(-g t^a) in t.
    const double a = 0.7;
    const double g = 2.0;
    const double t = 0.5;
    const double h = 1e-5;
    const double fd = (fs::ml_one(a, -g * std::pow(t + h, a)).value -
                       fs::ml_one(a, -g * std::pow(t - h, a)).value) /
                      (2.0 * h);
    EXPECT_NEAR(fs::heat_derivative_kernel(a, g, t), fd, 1e-6);
    EXPECT_THROW(fs::heat_derivative_kernel(2.0, 1.0, 1.0), fs::ParameterError);
    EXPECT_THROW(fs::heat_derivative_kernel(0.5, 1.0, 0.0), fs::ParameterError);
    EXPECT_THROW(fs::heat_derivative_kernel(0.5, -1.0, 1.0), fs::ParameterError);
}

TEST(MlMultivariate, FrozenTwoVariableValue) {
    // 60-digit brute-force double sum to total degree 300.
    const auto r = fs::ml_multivariate({{0.5, 1.0}, 1.0}, {-0.3, -0.7});
    EXPECT_NEAR(r.value, 0.39472116036538533128, 1e-13);
    EXPECT_EQ(r.method, fs::MLMethod::multishell_series);
}

TEST(MlMultivariate, ZeroVector) {
    for (double lambda : {0.4, 1.0, 2.7}) {
        const auto r = fs::ml_multivariate({{0.3, 1.2, 0.8}, lambda}, {0.0, 0.0, 0.0});
        EXPECT_DOUBLE_EQ(r.value, fs::reciprocal_gamma(lambda));
        EXPECT_GE(r.terms_used, 1u);
    }
}

TEST(MlMultivariate, ReductionAndCollapse) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ub(0.02, 1.98);
    std::uniform_real_distribution<double> ul(0.05, 2.95);
    std::uniform_real_distribution<double> uz(-50.0, 0.0);
    for (int i = 0; i < 40; ++i) {
        const double b = ub(rng);
        const double l = ul(rng);
        const double z = uz(rng);
        const double two = fs::ml_two({b, l}, z).value;
        EXPECT_NEAR(fs::ml_multivariate({{b}, l}, {z}).value, two, 1e-10) << b << " " << l << " " << z;
        const double b1 = ub(rng);
        EXPECT_NEAR(fs::ml_multivariate({{b1, b}, l}, {0.0, z}).value, two, 1e-10)
            << b << " " << l << " " << z;
    }
}

TEST(MlMultivariate, SeriesAndContourAgree) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ub(0.5, 1.9);
    std::uniform_real_distribution<double> ul(0.3, 2.5);
    std::uniform_real_distribution<double> uz(-3.0, 0.0);
    fs::MLOptions series;
    series.multi_route = fs::MultiRoute::series;
    fs::MLOptions contour;
    contour.multi_route = fs::MultiRoute::contour;
    for (int i = 0; i < 30; ++i) {
        const std::size_t m = 2 + static_cast<std::size_t>(i % 2);
        fs::MultiML p{{}, ul(rng)};
        std::vector<double> zs;
        for (std::size_t j = 0; j < m; ++j) {
            p.betas.push_back(ub(rng));
            zs.push_back(uz(rng));
        }
        const double a = fs::ml_multivariate(p, zs, series).value;
        const double c = fs::ml_multivariate(p, zs, contour).value;
        EXPECT_NEAR(a, c, 1e-11) << i;
    }
}

TEST(MlMultivariate, AgreesWithMpfrBruteForce) {
    struct Case {
        std::vector<double> b;
        double l;
        std::vector<double> z;
    };
    const std::vector<Case> cases = {
        {{0.3, 1.5}, 1.2, {-2.0, -5.0}},
        {{1.2, 0.4}, 2.0, {-10.0, -3.0}},
        {{0.5, 1.5}, 1.0, {-3.0, -8.0}},
        {{0.7, 0.6, 1.3}, 0.8, {-1.0, -0.5, -4.0}},
    };
    for (const auto& c : cases) {
        const double ref = oracle::ml_multi_series(c.b, c.l, c.z);
        EXPECT_NEAR(fs::ml_multivariate({c.b, c.l}, c.z).value, ref, 1e-12);
    }
}

TEST(MlMultivariate, ReportsPolesForLargeOrders) {
    // Orders above one produce oscillating, slowly damped contributions.
    const double v = fs::ml_multivariate({{1.8}, 1.0}, {-400.0}).value;
    EXPECT_NEAR(v, fs::ml_two({1.8, 1.0}, -400.0).value, 1e-10);
}

TEST(MlMultivariate, ParameterErrors) {
    EXPECT_THROW(fs::ml_multivariate({{}, 1.0}, {}), fs::ParameterError);
    EXPECT_THROW(fs::ml_multivariate({{0.5}, 1.0}, {-1.0, -2.0}), fs::ParameterError);
    EXPECT_THROW(fs::ml_multivariate({{0.5, -0.1}, 1.0}, {-1.0, -2.0}), fs::ParameterError);
    EXPECT_THROW(fs::ml_multivariate({{0.5}, 1.0}, {1.0}), fs::ParameterError);
    EXPECT_THROW(fs::ml_multivariate({{0.5}, 1.0}, {-2e4}), fs::ParameterError);
}
