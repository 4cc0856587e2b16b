#pragma once

/// @file
///
/// Gibbs statistics of the internal phonon modes m = 1..N-1.
///
/// Each mode is an independent oscillator whose occupation nu follows the
/// geometric law p_nu = (1 - e^{-y}) e^{-y nu}, y = lambda hbar omega_m, with
/// lambda the Lagrange multiplier that fixes the mean internal energy. The
/// centre-of-mass mode (omega_0 = 0) has no Gibbs weight and never enters
/// these sums.

#include <phonon_chain/chain_model.hpp>
#include <phonon_chain/detail/summation.hpp>
#include <phonon_chain/error.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace phonon_chain {

struct ModeThermo {
    double omega = 0.0;
    double partition = 1.0;       ///< Z_m
    double mean_occupation = 0.0; ///< Planck occupation
    double u2_mean = 0.0;         ///< Gibbs average of u_m^2
};

struct ThermoState {
    double lambda = 0.0;
    double internal_energy = 0.0;
    double gamma = 0.0; ///< 2 hbar kappa lambda / sqrt(mu)
    double hbar = 1.0;
    std::vector<ModeThermo> per_mode; ///< per_mode[k] belongs to mode m = k + 1

    /// 1/lambda, in energy units; no Boltzmann constant is introduced.
    double temperature() const noexcept { return 1.0 / lambda; }
};

struct MomentReport {
    double mean = 0.0;
    double variance = 0.0;
    std::optional<double> rel_std; ///< empty when mean == 0

    static MomentReport from(double mean, double variance) {
        MomentReport r{mean, variance, std::nullopt};
        if (mean != 0.0)
            r.rel_std = std::sqrt(variance) / std::abs(mean);
        return r;
    }
};

namespace detail {

inline void check_mode_args(double lambda, double omega, double hbar) {
    if (!(omega > 0.0))
        throw error(errc::zero_mode_excluded,
                    "mode frequency must be positive, got " + std::to_string(omega));
    if (!(lambda > 0.0))
        throw error(errc::invalid_params, "lambda must be positive");
    if (!(hbar > 0.0))
        throw error(errc::invalid_params, "hbar must be positive");
}

} // namespace detail

/// Z = 1 / (1 - e^{-lambda hbar omega})
inline double partition_fn_mode(double lambda, double omega, double hbar) {
    detail::check_mode_args(lambda, omega, hbar);
    return -1.0 / std::expm1(-lambda * hbar * omega);
}

inline double occupation_prob(double lambda, double omega, double hbar, std::size_t nu) {
    detail::check_mode_args(lambda, omega, hbar);
    const double y = lambda * hbar * omega;
    return -std::expm1(-y) * std::exp(-y * static_cast<double>(nu));
}

/// Smallest nu* whose geometric tail mass e^{-y(nu*+1)} is below 1e-12,
/// capped at 10^6.
inline std::size_t occupation_cutoff(double lambda, double omega, double hbar) {
    detail::check_mode_args(lambda, omega, hbar);
    constexpr double tail_target = 1e-12;
    constexpr std::size_t cap = 1'000'000;
    const double y = lambda * hbar * omega;
    const double estimate = std::ceil(-std::log(tail_target) / y) - 1.0;
    if (!(estimate < static_cast<double>(cap)))
        return cap;
    auto nu = static_cast<std::size_t>(std::max(0.0, estimate));
    while (nu > 0 && std::exp(-y * static_cast<double>(nu)) < tail_target)
        --nu;
    while (nu < cap && !(std::exp(-y * static_cast<double>(nu + 1)) < tail_target))
        ++nu;
    return nu;
}

/// n = 1 / (e^{lambda hbar omega} - 1)
inline double mean_occupation(double lambda, double omega, double hbar) {
    detail::check_mode_args(lambda, omega, hbar);
    return 1.0 / std::expm1(lambda * hbar * omega);
}

/// Gibbs average of u^2 for one mode, (hbar / 2 mu omega) coth(lambda hbar omega / 2).
/// The mean of u itself vanishes in every energy eigenstate, hence also here.
inline double mode_u2_mean(double lambda, double omega, double mass, double hbar) {
    detail::check_mode_args(lambda, omega, hbar);
    if (!(mass > 0.0))
        throw error(errc::invalid_params, "mass must be positive");
    return hbar / (2.0 * mass * omega) / std::tanh(0.5 * lambda * hbar * omega);
}

inline constexpr double mode_u_mean() noexcept { return 0.0; }

inline double internal_energy(double lambda, const ChainParams& params, const ModeBasis& basis) {
    detail::require_basis(params, basis);
    detail::compensated_sum energy;
    for (std::size_t m = 1; m < basis.size(); ++m) {
        const double w = basis.frequency(m);
        energy += params.hbar * w * mean_occupation(lambda, w, params.hbar);
    }
    return energy.value();
}

inline double gamma_parameter(double lambda, const ChainParams& params) {
    return 2.0 * params.hbar * params.coupling * lambda / std::sqrt(params.mass);
}

/// Full Gibbs state of the internal modes at a given lambda.
inline ThermoState thermo_state(double lambda, const ChainParams& params, const ModeBasis& basis) {
    params.validate();
    detail::require_basis(params, basis);
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw error(errc::invalid_params, "lambda must be positive and finite");

    ThermoState state;
    state.lambda = lambda;
    state.gamma = gamma_parameter(lambda, params);
    state.hbar = params.hbar;
    state.per_mode.reserve(basis.size() - 1);
    detail::compensated_sum energy;
    for (std::size_t m = 1; m < basis.size(); ++m) {
        const double w = basis.frequency(m);
        ModeThermo mode;
        mode.omega = w;
        mode.partition = partition_fn_mode(lambda, w, params.hbar);
        mode.mean_occupation = mean_occupation(lambda, w, params.hbar);
        mode.u2_mean = mode_u2_mean(lambda, w, params.mass, params.hbar);
        energy += params.hbar * w * mode.mean_occupation;
        state.per_mode.push_back(mode);
    }
    state.internal_energy = energy.value();
    return state;
}

/// Inverts the strictly decreasing map lambda -> E(lambda) by bisection on
/// log(lambda). The bracket is grown by doubling/halving from (N-1)/E.
inline ThermoState solve_lambda(double target_energy, const ChainParams& params,
                                const ModeBasis& basis) {
    params.validate();
    detail::require_basis(params, basis);
    if (!(target_energy > 0.0) || !std::isfinite(target_energy))
        throw error(errc::non_positive_energy,
                    "target internal energy must be positive, got " + std::to_string(target_energy));

    constexpr double rel_tol = 1e-10;
    constexpr int max_iterations = 200;
    constexpr int max_bracket_steps = 4000;

    auto residual = [&](double lambda) {
        return (internal_energy(lambda, params, basis) - target_energy) / target_energy;
    };

    const double start = static_cast<double>(params.n_particles - 1) / target_energy;
    double r0 = residual(start);
    if (std::abs(r0) < rel_tol)
        return thermo_state(start, params, basis);

    // E(lo) > target > E(hi)
    double lo = start, hi = start;
    int steps = 0;
    if (r0 > 0.0) {
        do {
            lo = hi;
            hi *= 2.0;
        } while (residual(hi) > 0.0 && ++steps < max_bracket_steps);
    } else {
        do {
            hi = lo;
            lo *= 0.5;
        } while (residual(lo) < 0.0 && ++steps < max_bracket_steps);
    }
    if (steps >= max_bracket_steps)
        throw error(errc::no_convergence, "could not bracket lambda");

    for (int it = 0; it < max_iterations; ++it) {
        const double mid = std::sqrt(lo) * std::sqrt(hi);
        const double r = residual(mid);
        if (std::abs(r) < rel_tol)
            return thermo_state(mid, params, basis);
        if (mid <= lo || mid >= hi)
            break;
        (r > 0.0 ? lo : hi) = mid;
    }
    throw error(errc::no_convergence,
                "bisection did not reach relative residual 1e-10 for E = " +
                    std::to_string(target_energy));
}

/// S = sum_m [lambda hbar omega_m n_m + ln Z_m]
inline double entropy(const ThermoState& thermo) {
    detail::compensated_sum s;
    for (const ModeThermo& mode : thermo.per_mode) {
        const double y = thermo.lambda * thermo.hbar * mode.omega;
        s += y * mode.mean_occupation - std::log1p(-std::exp(-y));
    }
    return s.value();
}

} // namespace phonon_chain
