#pragma once

/// @file
///
/// The chain length L = x_N - x_1 in the Gibbs state of the internal modes.
///
/// Written in mode coordinates, only odd modes contribute:
///
///   L = (N-1) xi + sum_{m=1}^{[N/2]} c_m u_{2m-1},
///   c_m = -sqrt(8/N) (-1)^m cos((2m-1) pi / 2N).
///
/// Since the modes are independent and <u> = 0, the mean is (N-1) xi for
/// every lambda and the variance is sum_m c_m^2 <u_{2m-1}^2>. For large N the
/// relative spread falls off like N^{-1/2}.

#include <phonon_chain/chain_model.hpp>
#include <phonon_chain/detail/summation.hpp>
#include <phonon_chain/error.hpp>
#include <phonon_chain/gibbs_thermo.hpp>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

namespace phonon_chain {

struct LengthExpansion {
    double constant = 0.0;             ///< (N-1) xi
    std::vector<double> coefficients;  ///< coefficients[k] multiplies u_{2k+1}

    /// L evaluated on a full mode vector u_0..u_{N-1}.
    double apply(const Eigen::VectorXd& u) const {
        if (static_cast<std::size_t>(u.size()) < 2 * coefficients.size())
            throw error(errc::dimension_mismatch, "mode vector too short for length expansion");
        detail::compensated_sum sum;
        sum += constant;
        for (std::size_t k = 0; k < coefficients.size(); ++k)
            sum += coefficients[k] * u(static_cast<Eigen::Index>(2 * k + 1));
        return sum.value();
    }
};

struct ScalingRow {
    std::size_t n_particles = 0;
    double lambda = 0.0;
    double mean_length = 0.0;
    double variance_exact = 0.0;
    double variance_asymptotic = 0.0;
    double rel_std_exact = 0.0;
    double rel_std_asymptotic = 0.0;
};

struct ScalingSweep {
    std::vector<ScalingRow> rows; ///< ascending in N
    std::optional<double> slope;  ///< least-squares d log(rel_std_exact) / d log N
    std::optional<double> intercept;
    double rel_std_ratio = 0.0;   ///< exact / asymptotic at the largest N
    double variance_ratio = 0.0;  ///< exact / asymptotic at the largest N
};

/// x_m = sin((2m-1) pi / 2N) for m = 1..[N/2]; omega_{2m-1} = (2 kappa / sqrt(mu)) x_m.
inline double odd_mode_sine(std::size_t n_particles, std::size_t m) {
    const double N = static_cast<double>(n_particles);
    return std::sin((std::numbers::pi * static_cast<double>(2 * m - 1)) / (2.0 * N));
}

inline double odd_mode_cosine(std::size_t n_particles, std::size_t m) {
    const double N = static_cast<double>(n_particles);
    return std::cos((std::numbers::pi * static_cast<double>(2 * m - 1)) / (2.0 * N));
}

inline LengthExpansion length_expansion(const ChainParams& params, const ModeBasis& basis) {
    params.validate();
    detail::require_basis(params, basis);
    const std::size_t N = params.n_particles;
    LengthExpansion expansion;
    expansion.constant = static_cast<double>(N - 1) * params.spacing;
    const double scale = std::sqrt(8.0 / static_cast<double>(N));
    for (std::size_t m = 1; m <= N / 2; ++m) {
        const double sign = m % 2 == 0 ? 1.0 : -1.0;
        expansion.coefficients.push_back(-scale * sign * odd_mode_cosine(N, m));
    }
    return expansion;
}

/// <L> = (N-1) xi, independent of the internal energy.
inline double length_mean(const ChainParams& params) {
    params.validate();
    return static_cast<double>(params.n_particles - 1) * params.spacing;
}

inline MomentReport length_variance_exact(const ChainParams& params, const ModeBasis& basis,
                                          const ThermoState& thermo) {
    params.validate();
    detail::require_basis(params, basis);
    const std::size_t N = params.n_particles;
    if (thermo.per_mode.size() != N - 1)
        throw error(errc::dimension_mismatch, "thermo state does not belong to this chain");

    detail::compensated_sum sum;
    for (std::size_t m = 1; m <= N / 2; ++m) {
        const double c = odd_mode_cosine(N, m);
        sum += c * c * thermo.per_mode[2 * m - 2].u2_mean;
    }
    const double variance = 8.0 / static_cast<double>(N) * sum.value();
    return MomentReport::from(length_mean(params), variance);
}

/// Leading large-N variance 12 N / (pi^2 lambda kappa^2).
inline double length_variance_asymptotic(const ChainParams& params, const ThermoState& thermo) {
    if (!(thermo.lambda > 0.0))
        throw error(errc::invalid_params, "lambda must be positive");
    const double N = static_cast<double>(params.n_particles);
    return 12.0 * N /
           (std::numbers::pi * std::numbers::pi * thermo.lambda * params.coupling * params.coupling);
}

/// 2 sqrt(3) / (pi kappa xi sqrt(lambda N)); N - 1 is replaced by N.
inline double relative_std_asymptotic(const ChainParams& params, const ThermoState& thermo) {
    if (!(params.spacing > 0.0))
        throw error(errc::mean_zero, "relative spread undefined for zero spacing");
    if (!(thermo.lambda > 0.0))
        throw error(errc::invalid_params, "lambda must be positive");
    const double N = static_cast<double>(params.n_particles);
    return 2.0 * std::sqrt(3.0) /
           (std::numbers::pi * params.coupling * params.spacing * std::sqrt(thermo.lambda) *
            std::sqrt(N));
}

/// f(x) = (sqrt(1 - x^2) / x) (1 + e^{-gamma x}) / (1 - e^{-gamma x}) on (0, 1).
inline double bound_function_f(double x, double gamma) {
    if (!(x > 0.0 && x < 1.0))
        throw error(errc::domain_error, "f is defined on (0, 1), got x = " + std::to_string(x));
    if (!(gamma > 0.0))
        throw error(errc::domain_error, "gamma must be positive");
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    return s / x / std::tanh(0.5 * gamma * x);
}

namespace detail {

// coth(y) - 1/y, accurate as y -> 0
inline double coth_minus_inverse(double y) {
    if (y < 1e-2) {
        const double y2 = y * y;
        return y * (1.0 / 3.0 - y2 * (1.0 / 45.0 - y2 * (2.0 / 945.0 - y2 / 4725.0)));
    }
    return 1.0 / std::tanh(y) - 1.0 / y;
}

// f(x) - 2/(gamma x^2), bounded on [0, 1]
inline double bound_function_regular_part(double x, double gamma) {
    const double y = 0.5 * gamma * x;
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    return -x / std::tanh(y) / (1.0 + s) + coth_minus_inverse(y) / x;
}

} // namespace detail

/// int_{a}^{1} f(x) dx with the 2/(gamma x^2) divergence integrated analytically.
/// Relative target 1e-9 on the regular remainder.
inline double bound_function_integral(double lower, double gamma) {
    if (!(lower > 0.0 && lower < 1.0))
        throw error(errc::domain_error, "lower limit must lie in (0, 1)");
    if (!(gamma > 0.0))
        throw error(errc::domain_error, "gamma must be positive");
    const double singular = 2.0 / gamma * (1.0 / lower - 1.0);
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double regular = integrator.integrate(
        [gamma](double x) { return detail::bound_function_regular_part(x, gamma); }, lower, 1.0,
        1e-9);
    return singular + regular;
}

/// (2/pi)(hbar / kappa sqrt(mu)) [2 x_1 f(x_1) + int_{x_1}^1 f dx], an upper
/// estimate of the exact length variance.
inline double length_variance_bound(const ChainParams& params, const ThermoState& thermo) {
    params.validate();
    const double x1 = odd_mode_sine(params.n_particles, 1);
    const double g = thermo.gamma;
    const double block_sum = 2.0 * x1 * bound_function_f(x1, g) + bound_function_integral(x1, g);
    return 2.0 / std::numbers::pi * params.hbar / (params.coupling * std::sqrt(params.mass)) *
           block_sum;
}

inline ScalingRow scaling_row(const ChainParams& params, double lambda) {
    const ModeBasis spectrum = build_mode_spectrum(params);
    const ThermoState thermo = thermo_state(lambda, params, spectrum);
    const MomentReport exact = length_variance_exact(params, spectrum, thermo);
    if (!exact.rel_std)
        throw error(errc::mean_zero, "scaling sweep needs a positive spacing");
    ScalingRow row;
    row.n_particles = params.n_particles;
    row.lambda = lambda;
    row.mean_length = exact.mean;
    row.variance_exact = exact.variance;
    row.variance_asymptotic = length_variance_asymptotic(params, thermo);
    row.rel_std_exact = *exact.rel_std;
    row.rel_std_asymptotic = relative_std_asymptotic(params, thermo);
    return row;
}

/// One row per N at fixed lambda, then a log-log fit of the exact relative
/// spread. Rows are independent; with `parallel` they are spread over
/// hardware threads, and the output order is by N either way.
inline ScalingSweep scaling_sweep(const ChainParams& params_template, double lambda,
                                  std::vector<std::size_t> n_values, bool parallel = false) {
    if (n_values.empty())
        throw error(errc::invalid_params, "scaling sweep needs at least one N");
    if (!(lambda > 0.0))
        throw error(errc::invalid_params, "lambda must be positive");
    std::sort(n_values.begin(), n_values.end());
    for (std::size_t n : n_values) {
        ChainParams p = params_template;
        p.n_particles = n;
        p.validate();
    }

    ScalingSweep sweep;
    sweep.rows.resize(n_values.size());
    auto compute = [&](std::size_t i) {
        ChainParams p = params_template;
        p.n_particles = n_values[i];
        sweep.rows[i] = scaling_row(p, lambda);
    };

    const std::size_t workers =
        parallel ? std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                                         n_values.size())
                 : 1;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_values.size(); ++i)
            compute(i);
    } else {
        std::vector<std::exception_ptr> failures(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n_values.size(); i += workers)
                        compute(i);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool)
            t.join();
        for (auto& f : failures)
            if (f)
                std::rethrow_exception(f);
    }

    const ScalingRow& last = sweep.rows.back();
    sweep.rel_std_ratio = last.rel_std_exact / last.rel_std_asymptotic;
    sweep.variance_ratio = last.variance_exact / last.variance_asymptotic;

    // ordinary least squares on (log N, log rel_std)
    const std::size_t k = sweep.rows.size();
    if (k >= 2 && sweep.rows.front().n_particles != last.n_particles) {
        double mx = 0.0, my = 0.0;
        for (const auto& r : sweep.rows) {
            mx += std::log(static_cast<double>(r.n_particles));
            my += std::log(r.rel_std_exact);
        }
        mx /= static_cast<double>(k);
        my /= static_cast<double>(k);
        double sxx = 0.0, sxy = 0.0;
        for (const auto& r : sweep.rows) {
            const double dx = std::log(static_cast<double>(r.n_particles)) - mx;
            sxx += dx * dx;
            sxy += dx * (std::log(r.rel_std_exact) - my);
        }
        sweep.slope = sxy / sxx;
        sweep.intercept = my - *sweep.slope * mx;
    }
    return sweep;
}

} // namespace phonon_chain
