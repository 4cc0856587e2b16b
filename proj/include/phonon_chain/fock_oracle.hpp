#pragma once

/// @file
///
/// Brute-force cross-checks for the Gibbs closed forms.
///
/// Nothing in here calls partition_fn_mode, mean_occupation, mode_u2_mean or
/// length_variance_exact. Averages are traces of truncated ladder-operator
/// matrices against raw Boltzmann weights e^{-lambda hbar omega nu}, and the
/// length coefficients are read off the dense mode transform.

#include <phonon_chain/chain_model.hpp>
#include <phonon_chain/detail/summation.hpp>
#include <phonon_chain/error.hpp>
#include <phonon_chain/gibbs_thermo.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace phonon_chain {

/// Tail mass above which a truncation is rejected.
inline constexpr double max_tail_mass = 1e-6;

struct TruncatedMode {
    std::size_t cutoff = 0;
    Eigen::MatrixXd u_matrix; ///< sqrt(hbar / 2 mu omega) (a + a^dagger) on |0>..|d-1>
    Eigen::DiagonalMatrix<double, Eigen::Dynamic> rho;
    double tail_mass = 0.0;  ///< Boltzmann weight discarded by the truncation
    double tail_bound = 0.0; ///< bound on |trace(rho u^2) - <u^2>_exact|
};

/// Builds the truncated mode. Throws CutoffTooSmall when the discarded weight
/// exceeds `max_tail_mass`.
inline TruncatedMode build_truncated_mode(double lambda, double omega, double mass, double hbar,
                                          std::size_t cutoff) {
    if (cutoff < 2)
        throw error(errc::cutoff_too_small, "cutoff must be at least 2");
    if (!(omega > 0.0))
        throw error(errc::zero_mode_excluded, "mode frequency must be positive");
    if (!(lambda > 0.0) || !(mass > 0.0) || !(hbar > 0.0))
        throw error(errc::invalid_params, "lambda, mass and hbar must be positive");

    const double y = lambda * hbar * omega;
    const double scale = hbar / (2.0 * mass * omega);
    const auto d = static_cast<Eigen::Index>(cutoff);

    Eigen::VectorXd weights(d);
    detail::compensated_sum kept, kept_ladder;
    for (Eigen::Index nu = 0; nu < d; ++nu) {
        weights(nu) = std::exp(-y * static_cast<double>(nu));
        kept += weights(nu);
        kept_ladder += static_cast<double>(2 * nu + 1) * weights(nu);
    }

    // Discarded weight, summed term by term until it stops mattering.
    detail::compensated_sum tail, tail_ladder;
    for (std::size_t nu = cutoff; nu < cutoff + 100'000'000; ++nu) {
        const double w = std::exp(-y * static_cast<double>(nu));
        tail += w;
        tail_ladder += static_cast<double>(2 * nu + 1) * w;
        if (w * static_cast<double>(2 * nu + 1) < 1e-20 * (kept.value() + tail.value()))
            break;
        if (tail.value() > max_tail_mass * (kept.value() + tail.value()))
            break; // already too much, rejected below
    }

    const double W = kept.value();
    const double tail_mass = tail.value() / (W + tail.value());
    if (tail_mass > max_tail_mass)
        throw error(errc::cutoff_too_small,
                    "cutoff " + std::to_string(cutoff) + " discards Boltzmann weight " +
                        std::to_string(tail_mass) + " at lambda hbar omega = " + std::to_string(y));

    TruncatedMode mode;
    mode.cutoff = cutoff;
    mode.u_matrix = Eigen::MatrixXd::Zero(d, d);
    const double amplitude = std::sqrt(scale);
    for (Eigen::Index nu = 0; nu + 1 < d; ++nu) {
        const double element = amplitude * std::sqrt(static_cast<double>(nu + 1));
        mode.u_matrix(nu, nu + 1) = element;
        mode.u_matrix(nu + 1, nu) = element;
    }
    mode.rho = Eigen::DiagonalMatrix<double, Eigen::Dynamic>(weights / W);
    mode.tail_mass = tail_mass;

    // Renormalizing over the kept levels and the missing |d-1> -> |d> ladder
    // step are the two truncation errors.
    const double A = kept_ladder.value();
    const double renormalization = (A * tail.value() + W * tail_ladder.value()) / (W * W);
    const double top_level = static_cast<double>(cutoff) * weights(d - 1) / W;
    const double roundoff = 1e-13 * A / W;
    mode.tail_bound = scale * (renormalization + top_level + roundoff);
    return mode;
}

/// trace(rho u^2)
inline double oracle_u2(const TruncatedMode& mode) {
    // u is symmetric, so (u^2)_{nu nu} is the squared norm of column nu.
    const Eigen::VectorXd u2_diagonal = mode.u_matrix.colwise().squaredNorm().transpose();
    detail::compensated_sum trace;
    for (Eigen::Index nu = 0; nu < u2_diagonal.size(); ++nu)
        trace += mode.rho.diagonal()(nu) * u2_diagonal(nu);
    return trace.value();
}

/// trace(rho u); vanishes because u has no diagonal.
inline double oracle_u(const TruncatedMode& mode) {
    return (mode.rho * mode.u_matrix).trace();
}

struct OccupationSampleStats {
    std::string_view generator = "mt19937_64";
    std::uint64_t seed = 0;
    std::size_t n_samples = 0;
    double mean_occupation = 0.0;
    double occupation_stderr = 0.0;
    double mean_u2 = 0.0; ///< sample mean of (hbar / 2 mu omega)(2 nu + 1)
    double u2_stderr = 0.0;
};

/// Draws nu from the geometric law by inverting its CDF,
/// nu = floor(ln U / (-lambda hbar omega)) with U uniform on (0, 1].
/// The generator is std::mt19937_64 seeded with `seed` directly; U is built
/// from the top 53 bits of each draw.
inline OccupationSampleStats mc_sample_occupations(double lambda, double omega, double mass,
                                                   double hbar, std::size_t n_samples,
                                                   std::uint64_t seed) {
    if (n_samples < 1)
        throw error(errc::invalid_params, "need at least one sample");
    if (!(omega > 0.0))
        throw error(errc::zero_mode_excluded, "mode frequency must be positive");
    if (!(lambda > 0.0) || !(mass > 0.0) || !(hbar > 0.0))
        throw error(errc::invalid_params, "lambda, mass and hbar must be positive");

    const double y = lambda * hbar * omega;
    std::mt19937_64 engine(seed);
    constexpr double unit = 1.0 / 9007199254740992.0; // 2^-53

    // Welford
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double u = static_cast<double>((engine() >> 11) + 1) * unit;
        const double nu = std::floor(std::log(u) / -y);
        const double delta = nu - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (nu - mean);
    }

    OccupationSampleStats stats;
    stats.seed = seed;
    stats.n_samples = n_samples;
    stats.mean_occupation = mean;
    const double n = static_cast<double>(n_samples);
    stats.occupation_stderr = n_samples > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
    const double scale = hbar / (2.0 * mass * omega);
    stats.mean_u2 = scale * (2.0 * mean + 1.0);
    stats.u2_stderr = 2.0 * scale * stats.occupation_stderr;
    return stats;
}

struct OracleLengthReport {
    MomentReport moments;
    double tail_bound = 0.0; ///< accumulated truncation bound on the variance
};

namespace detail {

// Y[N][m] - Y[1][m] from the dense transform
inline Eigen::VectorXd length_coefficients_from_transform(const ModeBasis& basis) {
    const Eigen::MatrixXd& Y = basis.transform();
    const Eigen::Index N = Y.rows();
    return (Y.row(N - 1) - Y.row(0)).transpose();
}

inline void require_oracle_thermo(const ChainParams& params, const ModeBasis& basis,
                                  const ThermoState& thermo) {
    params.validate();
    require_basis(params, basis);
    if (!(thermo.lambda > 0.0))
        throw error(errc::invalid_params, "thermo state has no valid lambda");
}

} // namespace detail

/// Mean and variance of L from per-mode truncated matrices. Cross terms
/// between modes vanish because each mode has <u> = 0 and the Gibbs state
/// factorizes, so only sum_m c_m^2 trace(rho_m u_m^2) remains.
inline OracleLengthReport oracle_length_moments(const ChainParams& params, const ModeBasis& basis,
                                                const ThermoState& thermo, std::size_t cutoff) {
    detail::require_oracle_thermo(params, basis, thermo);
    if (params.n_particles > 12)
        throw error(errc::invalid_params, "oracle scale is limited to N <= 12");

    const Eigen::VectorXd coeff = detail::length_coefficients_from_transform(basis);
    const Eigen::VectorXd x_eq = equilibrium_positions(params);
    double mean = x_eq(x_eq.size() - 1) - x_eq(0);
    detail::compensated_sum variance, bound;
    for (Eigen::Index m = 1; m < coeff.size(); ++m) {
        // even modes drop out of x_N - x_1 up to rounding in the transform
        if (m % 2 == 0)
            continue;
        const TruncatedMode mode = build_truncated_mode(
            thermo.lambda, basis.frequency(static_cast<std::size_t>(m)), params.mass, params.hbar,
            cutoff);
        mean += coeff(m) * oracle_u(mode);
        variance += coeff(m) * coeff(m) * oracle_u2(mode);
        bound += coeff(m) * coeff(m) * mode.tail_bound;
    }
    return {MomentReport::from(mean, variance.value()), bound.value()};
}

/// The same moments from the literal tensor-product Gibbs state of all N - 1
/// internal modes, each truncated to `cutoff` levels. Exponential in N, so
/// limited to N <= 3 and cutoff <= 10.
inline OracleLengthReport oracle_length_moments_full_space(const ChainParams& params,
                                                           const ModeBasis& basis,
                                                           const ThermoState& thermo,
                                                           std::size_t cutoff) {
    detail::require_oracle_thermo(params, basis, thermo);
    if (params.n_particles > 3 || cutoff > 10)
        throw error(errc::invalid_params, "full-space oracle is limited to N <= 3, cutoff <= 10");

    const Eigen::VectorXd coeff = detail::length_coefficients_from_transform(basis);
    const std::size_t modes = params.n_particles - 1;
    const auto d = static_cast<Eigen::Index>(cutoff);

    auto kron = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };

    std::vector<TruncatedMode> truncated;
    for (std::size_t m = 1; m <= modes; ++m)
        truncated.push_back(build_truncated_mode(thermo.lambda, basis.frequency(m), params.mass,
                                                 params.hbar, cutoff));

    Eigen::MatrixXd rho = Eigen::MatrixXd::Ones(1, 1);
    for (const auto& mode : truncated)
        rho = kron(rho, Eigen::MatrixXd(mode.rho));

    const Eigen::Index dim = rho.rows();
    const Eigen::VectorXd x_eq = equilibrium_positions(params);
    Eigen::MatrixXd length =
        (x_eq(x_eq.size() - 1) - x_eq(0)) * Eigen::MatrixXd::Identity(dim, dim);
    double bound = 0.0;
    for (std::size_t k = 0; k < modes; ++k) {
        Eigen::MatrixXd embedded = Eigen::MatrixXd::Ones(1, 1);
        for (std::size_t j = 0; j < modes; ++j)
            embedded = kron(embedded, j == k ? truncated[j].u_matrix
                                             : Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d)));
        const double c = coeff(static_cast<Eigen::Index>(k + 1));
        length += c * embedded;
        bound += c * c * truncated[k].tail_bound;
    }

    const double mean = (rho * length).trace();
    const double second = (rho * length * length).trace();
    return {MomentReport::from(mean, second - mean * mean), bound};
}

} // namespace phonon_chain
