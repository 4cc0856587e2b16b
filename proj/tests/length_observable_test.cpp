#include "test_common.hpp"

#include <phonon_chain/fock_oracle.hpp>
#include <phonon_chain/length_observable.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace phonon_chain;
using namespace phonon_chain::testing;

namespace {

// Var(x_N - x_1) summed over numerically obtained eigenvectors of the force
// constant matrix, each mode contributing (hbar / 2 mu omega) coth(y / 2).
double eigensolver_length_variance(const ChainParams& p, double lambda) {
    const auto N = static_cast<Eigen::Index>(p.n_particles);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
    for (Eigen::Index i = 0; i + 1 < N; ++i) {
        K(i, i) += 1.0;
        K(i + 1, i + 1) += 1.0;
        K(i, i + 1) = K(i + 1, i) = -1.0;
    }
    K *= p.coupling * p.coupling / p.mass;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(K);
    double variance = 0.0;
    for (Eigen::Index m = 1; m < N; ++m) {
        const double omega = std::sqrt(solver.eigenvalues()(m));
        const double c = solver.eigenvectors()(N - 1, m) - solver.eigenvectors()(0, m);
        const double y = lambda * p.hbar * omega;
        variance += c * c * p.hbar / (2.0 * p.mass * omega) / std::tanh(y / 2.0);
    }
    return variance;
}

// composite Simpson after x = 1 - t^2, which removes the square-root edge
double simpson_f_integral(double lower, double gamma, int panels) {
    const double t_max = std::sqrt(1.0 - lower);
    auto g = [gamma](double t) {
        if (t == 0.0) return 0.0;
        return bound_function_f(1.0 - t * t, gamma) * 2.0 * t;
    };
    const double h = t_max / panels;
    double s = g(0.0) + g(t_max);
    for (int i = 1; i < panels; ++i)
        s += (i % 2 ? 4.0 : 2.0) * g(i * h);
    return s * h / 3.0;
}

} // namespace

TEST(LengthExpansion, TwoParticles) {
    const ChainParams p{2, 1.0, 1.0, 0.5, 1.0};
    const LengthExpansion e = length_expansion(p, build_mode_spectrum(p));
    ASSERT_EQ(e.coefficients.size(), 1u);
    EXPECT_NEAR(e.coefficients[0], std::sqrt(2.0), 1e-15);
    EXPECT_DOUBLE_EQ(e.constant, 0.5);
}

TEST(LengthExpansion, AgreesWithPositions) {
    std::mt19937_64 rng(5);
    for (std::size_t n : {2, 3, 7, 8, 31}) {
        const ChainParams p{n, 1.0, 1.0, 0.8, 1.0};
        const ModeBasis b = build_mode_basis(p);
        const LengthExpansion e = length_expansion(p, b);
        EXPECT_EQ(e.coefficients.size(), n / 2);
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd u = random_vector(n, rng);
            const PhaseState s = from_modes(p, b, u, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
            const double direct = s.positions(static_cast<Eigen::Index>(n) - 1) - s.positions(0);
            EXPECT_NEAR(e.apply(u), direct, 1e-12) << "N = " << n;
        }
    }
}

TEST(LengthExpansion, EvenModesDropOut) {
    // x_N - x_1 from the transform has no even-mode component
    const ChainParams p{10};
    const ModeBasis b = build_mode_basis(p);
    const auto& Y = b.transform();
    for (Eigen::Index m = 0; m < 10; m += 2)
        EXPECT_NEAR(Y(9, m) - Y(0, m), 0.0, 1e-14) << m;
    const LengthExpansion e = length_expansion(p, b);
    for (std::size_t k = 0; k < e.coefficients.size(); ++k)
        EXPECT_NEAR(e.coefficients[k], Y(9, 2 * k + 1) - Y(0, 2 * k + 1), 1e-14);
}

TEST(LengthExpansion, ShortVector) {
    const ChainParams p{6};
    const LengthExpansion e = length_expansion(p, build_mode_spectrum(p));
    EXPECT_THROW(e.apply(Eigen::VectorXd::Zero(4)), error);
}

TEST(LengthMoments, MeanIsRestLength) {
    const ChainParams p{101, 1.0, 1.0, 0.3, 1.0};
    const ModeBasis b = build_mode_spectrum(p);
    for (double lambda : {0.1, 1.0, 10.0}) {
        const MomentReport r = length_variance_exact(p, b, thermo_state(lambda, p, b));
        EXPECT_DOUBLE_EQ(r.mean, 100 * 0.3);
    }
    EXPECT_DOUBLE_EQ(length_mean(p), 30.0);
}

TEST(LengthMoments, TwoParticleReducedMass) {
    for (double lambda : {0.1, 1.0, 10.0}) {
        const ChainParams p{2, 1.7, 0.9, 1.0, 1.2};
        const ModeBasis b = build_mode_spectrum(p);
        const double exact = length_variance_exact(p, b, thermo_state(lambda, p, b)).variance;
        const double reference = reduced_mass_length_variance(p, lambda);
        EXPECT_NEAR(exact, reference, 1e-12 * reference);
    }
}

TEST(LengthMoments, AgreesWithEigensolver) {
    for (std::size_t n : {3, 4, 7, 20}) {
        const ChainParams p{n, 1.3, 0.7, 1.0, 0.8};
        const ModeBasis b = build_mode_spectrum(p);
        for (double lambda : {0.05, 1.0, 30.0}) {
            const double exact = length_variance_exact(p, b, thermo_state(lambda, p, b)).variance;
            const double reference = eigensolver_length_variance(p, lambda);
            EXPECT_NEAR(exact, reference, 1e-11 * reference) << n << " " << lambda;
        }
    }
}

TEST(LengthMoments, AgreesWithFockOracle) {
    const ChainParams p{6, 1.0, 1.0, 1.0, 1.0};
    const ModeBasis b = build_mode_basis(p);
    for (double lambda : {0.5, 2.0}) {
        const ThermoState t = thermo_state(lambda, p, b);
        const MomentReport exact = length_variance_exact(p, b, t);
        const OracleLengthReport oracle = oracle_length_moments(p, b, t, 400);
        EXPECT_NEAR(oracle.moments.variance, exact.variance, 1e-9);
        EXPECT_NEAR(oracle.moments.mean, exact.mean, 1e-12);
    }
}

TEST(LengthMoments, GroundStateLimit) {
    const ChainParams p{9, 1.0, 1.0, 1.0, 1.0};
    const ModeBasis b = build_mode_spectrum(p);
    const double cold = length_variance_exact(p, b, thermo_state(1e4, p, b)).variance;
    const auto le = length_expansion(p, b);
    double ground = 0.0;
    for (std::size_t k = 0; k < le.coefficients.size(); ++k)
        ground += le.coefficients[k] * le.coefficients[k] / (2.0 * b.frequency(2 * k + 1));
    EXPECT_NEAR(cold, ground, 1e-14);
    EXPECT_GT(cold, 0.0);
}

TEST(LengthMoments, HighTemperatureExpansion) {
    // classical bond independence plus the first quantum correction:
    // Var = (N-1)/(lambda kappa^2) + lambda hbar^2 / (6 mu) + O(lambda^3)
    for (std::size_t n : {2, 5, 50, 501}) {
        const ChainParams p{n, 1.3, 0.9, 1.0, 1.1};
        const ModeBasis b = build_mode_spectrum(p);
        const double lambda = 1e-3;
        const double exact = length_variance_exact(p, b, thermo_state(lambda, p, b)).variance;
        const double series = static_cast<double>(n - 1) / (lambda * p.coupling * p.coupling) +
                              lambda * p.hbar * p.hbar / (6.0 * p.mass);
        EXPECT_NEAR(exact, series, 1e-9 * series) << n;
    }
}

TEST(LengthMoments, LargeChainRatioToLeadingForm) {
    // exact -> N/(lambda kappa^2), so exact / (12 N / pi^2 lambda kappa^2) -> pi^2 / 12
    const ChainParams p{4096, 1.0, 1.0, 1.0, 1.0};
    const ModeBasis b = build_mode_spectrum(p);
    const ThermoState t = thermo_state(1.0, p, b);
    const double ratio = length_variance_exact(p, b, t).variance / length_variance_asymptotic(p, t);
    EXPECT_NEAR(ratio, std::numbers::pi * std::numbers::pi / 12.0, 2e-3);
}

TEST(LengthMoments, VarianceDecreasesWithLambda) {
    const ChainParams p{33};
    const ModeBasis b = build_mode_spectrum(p);
    double previous = length_variance_exact(p, b, thermo_state(0.01, p, b)).variance;
    for (double lambda = 0.02; lambda < 50.0; lambda *= 2.0) {
        const double v = length_variance_exact(p, b, thermo_state(lambda, p, b)).variance;
        EXPECT_LT(v, previous);
        previous = v;
    }
}

TEST(LengthMoments, ZeroSpacingHasNoRelativeSpread) {
    const ChainParams p{4, 1.0, 1.0, 0.0, 1.0};
    const ModeBasis b = build_mode_spectrum(p);
    const ThermoState t = thermo_state(1.0, p, b);
    const MomentReport r = length_variance_exact(p, b, t);
    EXPECT_EQ(r.mean, 0.0);
    EXPECT_FALSE(r.rel_std.has_value());
    try {
        relative_std_asymptotic(p, t);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::mean_zero);
    }
    EXPECT_THROW(scaling_row(p, 1.0), error);
}

TEST(Asymptotics, PluggedValues) {
    ThermoState t;
    t.lambda = 1.0;
    const double n_pi = std::numbers::pi * std::numbers::pi;
    ChainParams p{10, 1.0, 1.0, 1.0, 1.0};
    // 12 N / (pi^2 lambda kappa^2) with N = 10
    EXPECT_NEAR(length_variance_asymptotic(p, t), 120.0 / n_pi, 1e-13);
    p.n_particles = 12;
    EXPECT_NEAR(relative_std_asymptotic(p, t), 2.0 * std::sqrt(3.0) / (std::numbers::pi * std::sqrt(12.0)),
                1e-15);
    EXPECT_NEAR(relative_std_asymptotic(p, t), 1.0 / std::numbers::pi, 1e-15);
    t.lambda = 4.0;
    p.coupling = 0.5;
    p.spacing = 2.0;
    EXPECT_NEAR(relative_std_asymptotic(p, t), 1.0 / (2.0 * std::numbers::pi), 1e-15);
}

TEST(BoundFunction, ShapeAndDomain) {
    for (double gamma : {0.1, 1.0, 10.0}) {
        double previous = bound_function_f(1e-3, gamma);
        for (double x = 0.01; x < 1.0; x += 0.01) {
            const double f = bound_function_f(x, gamma);
            EXPECT_GT(f, 0.0);
            EXPECT_LT(f, previous);
            previous = f;
        }
        EXPECT_LT(bound_function_f(1.0 - 1e-12, gamma), 1e-4);
        for (double bad : {0.0, 1.0, -0.5, 1.5}) {
            try {
                bound_function_f(bad, gamma);
                FAIL();
            } catch (const error& e) {
                EXPECT_EQ(e.code(), errc::domain_error);
            }
        }
    }
    EXPECT_THROW(bound_function_f(0.5, 0.0), error);
    const double x = 0.4, gamma = 1.7;
    EXPECT_NEAR(bound_function_f(x, gamma),
                std::sqrt(1 - x * x) / x * (1 + std::exp(-gamma * x)) / (1 - std::exp(-gamma * x)),
                1e-14);
}

TEST(BoundFunction, RegularPartIsSmooth) {
    for (double gamma : {0.01, 1.0, 20.0})
        for (double x : {1e-8, 1e-4, 0.3, 0.9}) {
            const double expected = bound_function_f(x, gamma) - 2.0 / (gamma * x * x);
            EXPECT_NEAR(detail::bound_function_regular_part(x, gamma), expected,
                        1e-9 * (1.0 + std::abs(expected)) + 1e-15 * 2.0 / (gamma * x * x));
        }
}

TEST(BoundFunction, IntegralMatchesSimpson) {
    for (double gamma : {0.05, 1.0, 12.0})
        for (double lower : {0.02, 0.2, 0.7}) {
            const double reference = simpson_f_integral(lower, gamma, 200000);
            EXPECT_NEAR(bound_function_integral(lower, gamma), reference, 1e-8 * reference)
                << gamma << " " << lower;
        }
    EXPECT_THROW(bound_function_integral(0.0, 1.0), error);
    EXPECT_THROW(bound_function_integral(0.5, -1.0), error);
}

TEST(VarianceBound, HoldsAcrossChains) {
    for (std::size_t n : {2, 3, 16, 257, 10000})
        for (double lambda : {0.05, 0.5, 1.0, 2.0, 20.0}) {
            const ChainParams p{n, 1.2, 0.8, 1.0, 1.0};
            const ModeBasis b = build_mode_spectrum(p);
            const ThermoState t = thermo_state(lambda, p, b);
            const double exact = length_variance_exact(p, b, t).variance;
            EXPECT_LE(exact, length_variance_bound(p, t)) << n << " " << lambda;
        }
}

TEST(ScalingSweep, InverseSquareRootSlope) {
    const ChainParams p{2, 1.0, 1.0, 1.0, 1.0};
    const ScalingSweep sweep = scaling_sweep(p, 1.0, {4096, 64, 512, 256, 1024, 128, 2048});
    ASSERT_EQ(sweep.rows.size(), 7u);
    for (std::size_t i = 1; i < sweep.rows.size(); ++i)
        EXPECT_LT(sweep.rows[i - 1].n_particles, sweep.rows[i].n_particles);
    ASSERT_TRUE(sweep.slope.has_value());
    EXPECT_NEAR(*sweep.slope, -0.5, 0.02);
    EXPECT_NEAR(sweep.variance_ratio, std::numbers::pi * std::numbers::pi / 12.0, 5e-3);
    EXPECT_NEAR(sweep.rel_std_ratio, std::numbers::pi / std::sqrt(12.0), 5e-3);
}

TEST(ScalingSweep, ParallelMatchesSerial) {
    const ChainParams p{2, 1.0, 1.3, 0.7, 1.0};
    const std::vector<std::size_t> ns{10, 100, 1000, 50, 500};
    const ScalingSweep serial = scaling_sweep(p, 0.8, ns, false);
    const ScalingSweep parallel = scaling_sweep(p, 0.8, ns, true);
    ASSERT_EQ(serial.rows.size(), parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        EXPECT_EQ(serial.rows[i].n_particles, parallel.rows[i].n_particles);
        EXPECT_EQ(serial.rows[i].variance_exact, parallel.rows[i].variance_exact);
    }
    EXPECT_EQ(*serial.slope, *parallel.slope);
}

TEST(ScalingSweep, RejectsBadInput) {
    const ChainParams p{};
    EXPECT_THROW(scaling_sweep(p, 1.0, {}), error);
    EXPECT_THROW(scaling_sweep(p, 0.0, {10}), error);
    EXPECT_THROW(scaling_sweep(p, 1.0, {1, 10}), error);
    const ScalingSweep single = scaling_sweep(p, 1.0, {10});
    EXPECT_FALSE(single.slope.has_value());
}
