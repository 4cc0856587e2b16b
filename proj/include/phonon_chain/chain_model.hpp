#pragma once

/// @file
///
/// Structural data of the open harmonic chain: N identical particles of mass
/// mu on a line, nearest neighbours joined by springs of strength kappa with
/// equilibrium spacing xi,
///
///   H = (1/2mu) sum_n p_n^2 + (kappa^2/2) sum_{n=2..N} (x_n - x_{n-1} - xi)^2.
///
/// The normal-mode transform is evaluated in closed form. Particles are
/// numbered n = 1..N and modes m = 0..N-1; storage is zero-based, so row
/// `n - 1` of the transform belongs to particle n and column m to mode m.

#include <phonon_chain/detail/summation.hpp>
#include <phonon_chain/error.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>

namespace phonon_chain {

struct ChainParams {
    std::size_t n_particles = 2;
    double mass = 1.0;     ///< mu
    double coupling = 1.0; ///< kappa; kappa^2 (dx)^2 is an energy
    double spacing = 1.0;  ///< xi, equilibrium inter-particle distance
    double hbar = 1.0;

    void validate() const {
        if (n_particles < 2)
            throw error(errc::invalid_params, "chain needs at least 2 particles, got " +
                                                  std::to_string(n_particles));
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw error(errc::invalid_params, "mass must be positive");
        if (!(coupling > 0.0) || !std::isfinite(coupling))
            throw error(errc::invalid_params, "coupling must be positive");
        if (!(spacing >= 0.0) || !std::isfinite(spacing))
            throw error(errc::invalid_params, "spacing must be nonnegative");
        if (!(hbar > 0.0) || !std::isfinite(hbar))
            throw error(errc::invalid_params, "hbar must be positive");
    }
};

struct PhaseState {
    Eigen::VectorXd positions;
    Eigen::VectorXd momenta;
};

struct ModeCoordinates {
    Eigen::VectorXd u; ///< mode displacements u_0..u_{N-1}
    Eigen::VectorXd q; ///< mode momenta q_0..q_{N-1}
};

/// Orthogonal mode transform and the mode frequencies.
///
/// The dense transform is optional: thermodynamic and length statistics only
/// need the frequencies, and at N = 2^16 the N x N matrix would not fit in
/// memory. Operations that map coordinates require it.
class ModeBasis {
public:
    ModeBasis(Eigen::VectorXd frequencies, Eigen::MatrixXd transform)
        : frequencies_(std::move(frequencies)), transform_(std::move(transform)) {}

    std::size_t size() const noexcept { return static_cast<std::size_t>(frequencies_.size()); }
    const Eigen::VectorXd& frequencies() const noexcept { return frequencies_; }
    double frequency(std::size_t mode) const { return frequencies_(static_cast<Eigen::Index>(mode)); }

    bool has_transform() const noexcept { return transform_.size() != 0; }

    const Eigen::MatrixXd& transform() const {
        if (!has_transform())
            throw error(errc::missing_transform,
                        "mode basis was built without the dense transform");
        return transform_;
    }

private:
    Eigen::VectorXd frequencies_;
    Eigen::MatrixXd transform_;
};

namespace detail {

inline void require_size(Eigen::Index got, std::size_t expected, const char* what) {
    if (static_cast<std::size_t>(got) != expected)
        throw error(errc::dimension_mismatch, std::string(what) + " has length " +
                                                  std::to_string(got) + ", expected " +
                                                  std::to_string(expected));
}

inline void require_basis(const ChainParams& params, const ModeBasis& basis) {
    if (basis.size() != params.n_particles)
        throw error(errc::dimension_mismatch, "mode basis built for N = " +
                                                  std::to_string(basis.size()) +
                                                  ", params have N = " +
                                                  std::to_string(params.n_particles));
}

} // namespace detail

/// Transform entry Y[n][m] for particle n in 1..N and mode m in 0..N-1.
inline double transform_entry(std::size_t n_particles, std::size_t particle, std::size_t mode) {
    const auto N = static_cast<long long>(n_particles);
    const auto n = static_cast<long long>(particle);
    const auto m = static_cast<long long>(mode);
    if (m == 0)
        return 1.0 / std::sqrt(static_cast<double>(N));
    const double norm = std::sqrt(2.0 / static_cast<double>(N));
    // pi m (n - (N+1)/2) / N, with the integer part formed exactly
    const double arg = (std::numbers::pi * static_cast<double>(m * (2 * n - N - 1))) /
                       static_cast<double>(2 * N);
    return m % 2 == 0 ? norm * std::cos(arg) : norm * std::sin(arg);
}

/// omega_m = (2 kappa / sqrt(mu)) sin(m pi / 2N).
inline double mode_frequency(const ChainParams& params, std::size_t mode) {
    const double N = static_cast<double>(params.n_particles);
    return 2.0 * params.coupling / std::sqrt(params.mass) *
           std::sin((std::numbers::pi * static_cast<double>(mode)) / (2.0 * N));
}

/// Frequencies only; see ModeBasis.
inline ModeBasis build_mode_spectrum(const ChainParams& params) {
    params.validate();
    const std::size_t N = params.n_particles;
    Eigen::VectorXd omega(static_cast<Eigen::Index>(N));
    omega(0) = 0.0;
    for (std::size_t m = 1; m < N; ++m)
        omega(static_cast<Eigen::Index>(m)) = mode_frequency(params, m);
    return ModeBasis(std::move(omega), Eigen::MatrixXd());
}

inline ModeBasis build_mode_basis(const ChainParams& params) {
    ModeBasis spectrum = build_mode_spectrum(params);
    const std::size_t N = params.n_particles;
    Eigen::MatrixXd Y(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t m = 0; m < N; ++m)
        for (std::size_t n = 1; n <= N; ++n)
            Y(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(m)) =
                transform_entry(N, n, m);
    return ModeBasis(spectrum.frequencies(), std::move(Y));
}

/// max |(Y^T Y - I)_{ij}|
inline double orthogonality_residual(const ModeBasis& basis) {
    const Eigen::MatrixXd& Y = basis.transform();
    const Eigen::Index N = Y.cols();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(N, N);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(Y.transpose());
    double worst = 0.0;
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index i = j; i < N; ++i)
            worst = std::max(worst, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

/// x_n = (n - (N+1)/2) xi, centred on the origin.
inline Eigen::VectorXd equilibrium_positions(const ChainParams& params) {
    const auto N = static_cast<Eigen::Index>(params.n_particles);
    Eigen::VectorXd x(N);
    for (Eigen::Index i = 0; i < N; ++i)
        x(i) = (static_cast<double>(2 * (i + 1) - N - 1) / 2.0) * params.spacing;
    return x;
}

inline double hamiltonian_cartesian(const ChainParams& params, const PhaseState& state) {
    params.validate();
    detail::require_size(state.positions.size(), params.n_particles, "positions");
    detail::require_size(state.momenta.size(), params.n_particles, "momenta");

    detail::compensated_sum kinetic;
    for (Eigen::Index i = 0; i < state.momenta.size(); ++i)
        kinetic += state.momenta(i) * state.momenta(i);

    detail::compensated_sum potential;
    for (Eigen::Index i = 1; i < state.positions.size(); ++i) {
        const double stretch = state.positions(i) - state.positions(i - 1) - params.spacing;
        potential += stretch * stretch;
    }
    return kinetic.value() / (2.0 * params.mass) +
           0.5 * params.coupling * params.coupling * potential.value();
}

/// u = Y^T (x - x_eq), q = Y^T p.
inline ModeCoordinates to_modes(const ChainParams& params, const ModeBasis& basis,
                                const PhaseState& state) {
    detail::require_basis(params, basis);
    detail::require_size(state.positions.size(), params.n_particles, "positions");
    detail::require_size(state.momenta.size(), params.n_particles, "momenta");
    const Eigen::MatrixXd& Y = basis.transform();
    return {Y.transpose() * (state.positions - equilibrium_positions(params)),
            Y.transpose() * state.momenta};
}

inline PhaseState from_modes(const ChainParams& params, const ModeBasis& basis,
                             const Eigen::VectorXd& u, const Eigen::VectorXd& q) {
    detail::require_basis(params, basis);
    detail::require_size(u.size(), params.n_particles, "u");
    detail::require_size(q.size(), params.n_particles, "q");
    const Eigen::MatrixXd& Y = basis.transform();
    return {Y * u + equilibrium_positions(params), Y * q};
}

/// (1/2mu) sum q_m^2 + (mu/2) sum omega_m^2 u_m^2. The m = 0 term is the free
/// centre-of-mass energy P^2/2M.
inline double hamiltonian_modes(const ChainParams& params, const ModeBasis& basis,
                                const Eigen::VectorXd& u, const Eigen::VectorXd& q) {
    detail::require_basis(params, basis);
    detail::require_size(u.size(), params.n_particles, "u");
    detail::require_size(q.size(), params.n_particles, "q");
    detail::compensated_sum kinetic, potential;
    for (Eigen::Index m = 0; m < u.size(); ++m) {
        kinetic += q(m) * q(m);
        const double w = basis.frequencies()(m);
        potential += w * w * u(m) * u(m);
    }
    return kinetic.value() / (2.0 * params.mass) + 0.5 * params.mass * potential.value();
}

/// E = sum_{m=1}^{N-1} nu_m hbar omega_m, without zero-point energy.
/// `occupations[k]` is the phonon number of mode m = k + 1.
inline double energy_level(const ChainParams& params, const ModeBasis& basis,
                           std::span<const std::size_t> occupations) {
    detail::require_basis(params, basis);
    if (occupations.size() != params.n_particles - 1)
        throw error(errc::dimension_mismatch,
                    "expected " + std::to_string(params.n_particles - 1) +
                        " occupation numbers, got " + std::to_string(occupations.size()));
    detail::compensated_sum energy;
    for (std::size_t k = 0; k < occupations.size(); ++k)
        energy += static_cast<double>(occupations[k]) * params.hbar * basis.frequency(k + 1);
    return energy.value();
}

} // namespace phonon_chain
