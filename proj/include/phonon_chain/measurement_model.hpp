#pragma once

/// @file
///
/// Small dense density matrices for the measurement picture.
///
/// A `Decomposition` is a proper mixture: an ensemble of (not necessarily
/// orthogonal) pure states with preparation weights. A `DensityMatrix` is only
/// the operator; it carries no preferred decomposition. Partial traces, such
/// as the apparatus state left after a von Neumann premeasurement, return a
/// `DensityMatrix` and nothing else.
///
/// Tolerances: 1e-12 for algebraic identities, 1e-10 for spectral checks.

#include <phonon_chain/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace phonon_chain {

using cplx = std::complex<double>;

inline constexpr double algebraic_tol = 1e-12;
inline constexpr double spectral_tol = 1e-10;

namespace detail {

inline double max_abs(const Eigen::MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Eigen::MatrixXcd& m) {
    return max_abs(m - m.adjoint());
}

inline double min_eigenvalue(const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

} // namespace detail

class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity.
    explicit DensityMatrix(Eigen::MatrixXcd elements) : elements_(std::move(elements)) {
        if (elements_.rows() != elements_.cols() || elements_.rows() < 1)
            throw error(errc::dimension_mismatch, "density matrix must be square and nonempty");
        if (detail::hermiticity_defect(elements_) > algebraic_tol)
            throw error(errc::invalid_state, "density matrix is not Hermitian");
        const cplx tr = elements_.trace();
        if (std::abs(tr - cplx(1.0, 0.0)) > algebraic_tol)
            throw error(errc::invalid_state,
                        "density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
        if (detail::min_eigenvalue(elements_) < -spectral_tol)
            throw error(errc::invalid_state, "density matrix is not positive semidefinite");
    }

    /// |psi><psi| for a unit vector.
    static DensityMatrix from_pure(const Eigen::VectorXcd& psi) {
        if (std::abs(psi.norm() - 1.0) > algebraic_tol)
            throw error(errc::norm_violation, "state vector is not normalized");
        return DensityMatrix(psi * psi.adjoint());
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(elements_.rows()); }
    const Eigen::MatrixXcd& elements() const noexcept { return elements_; }

    double max_abs_difference(const DensityMatrix& other) const {
        if (other.dim() != dim())
            throw error(errc::dimension_mismatch, "density matrices differ in dimension");
        return detail::max_abs(elements_ - other.elements_);
    }

private:
    Eigen::MatrixXcd elements_;
};

/// rho = sum_k c_k |k><k| with a distinguished ensemble.
class Decomposition {
public:
    Decomposition(std::vector<double> weights, std::vector<Eigen::VectorXcd> states)
        : weights_(std::move(weights)), states_(std::move(states)) {
        if (weights_.empty() || weights_.size() != states_.size())
            throw error(errc::invalid_state, "need one weight per state and at least one state");
        double total = 0.0;
        for (double c : weights_) {
            if (!(c > 0.0 && c <= 1.0))
                throw error(errc::invalid_state, "weights must lie in (0, 1]");
            total += c;
        }
        if (std::abs(total - 1.0) > algebraic_tol)
            throw error(errc::invalid_state, "weights sum to " + std::to_string(total));
        for (const auto& s : states_) {
            if (s.size() != states_.front().size())
                throw error(errc::dimension_mismatch, "states differ in dimension");
            if (std::abs(s.norm() - 1.0) > algebraic_tol)
                throw error(errc::norm_violation, "ensemble state is not normalized");
        }
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(states_.front().size()); }
    std::size_t size() const noexcept { return weights_.size(); }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<Eigen::VectorXcd>& states() const noexcept { return states_; }

private:
    std::vector<double> weights_;
    std::vector<Eigen::VectorXcd> states_;
};

inline DensityMatrix proper_mixture(const Decomposition& decomp) {
    const auto d = static_cast<Eigen::Index>(decomp.dim());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t k = 0; k < decomp.size(); ++k)
        rho += decomp.weights()[k] * (decomp.states()[k] * decomp.states()[k].adjoint());
    return DensityMatrix(std::move(rho));
}

/// Eigen-ensemble of rho, dropping eigenvalues at or below `threshold`.
inline Decomposition spectral_decomposition(const DensityMatrix& rho, double threshold = 1e-14) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.elements());
    std::vector<double> weights;
    std::vector<Eigen::VectorXcd> states;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double p = solver.eigenvalues()(i);
        if (p > threshold) {
            weights.push_back(std::min(p, 1.0));
            states.push_back(solver.eigenvectors().col(i).normalized());
        }
    }
    return Decomposition(std::move(weights), std::move(states));
}

/// Unitary premeasurement |a_1>|A_1> -> sum_k c_k |a_k> (x) |A_k>, with both
/// eigenbases fixed to the standard basis. The system is the first tensor
/// factor: index = s * dim_apparatus + a.
inline Eigen::VectorXcd premeasurement(const Eigen::VectorXcd& amplitudes, std::size_t dim_system,
                                       std::size_t dim_apparatus) {
    if (amplitudes.size() == 0 ||
        static_cast<std::size_t>(amplitudes.size()) > std::min(dim_system, dim_apparatus))
        throw error(errc::dimension_mismatch,
                    "need 1..min(dim_system, dim_apparatus) amplitudes");
    if (std::abs(amplitudes.squaredNorm() - 1.0) > algebraic_tol)
        throw error(errc::norm_violation, "amplitudes must satisfy sum |c_k|^2 = 1");
    const auto dA = static_cast<Eigen::Index>(dim_apparatus);
    Eigen::VectorXcd joint =
        Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim_system) * dA);
    for (Eigen::Index k = 0; k < amplitudes.size(); ++k)
        joint(k * dA + k) = amplitudes(k);
    return joint;
}

/// sum_k |c_k|^2 |A_k><A_k| on the apparatus space.
inline DensityMatrix apparatus_mixture(const Eigen::VectorXcd& amplitudes,
                                       std::size_t dim_apparatus) {
    if (static_cast<std::size_t>(amplitudes.size()) > dim_apparatus)
        throw error(errc::dimension_mismatch, "more amplitudes than apparatus states");
    const auto dA = static_cast<Eigen::Index>(dim_apparatus);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dA, dA);
    for (Eigen::Index k = 0; k < amplitudes.size(); ++k)
        rho(k, k) = std::norm(amplitudes(k));
    return DensityMatrix(std::move(rho));
}

enum class Factor { first, second };

/// Traces out one factor of a bipartite state on C^dim_first (x) C^dim_second.
inline DensityMatrix partial_trace(const DensityMatrix& joint, std::size_t dim_first,
                                   std::size_t dim_second, Factor keep) {
    if (dim_first * dim_second != joint.dim() || dim_first == 0 || dim_second == 0)
        throw error(errc::dimension_mismatch,
                    "joint dimension " + std::to_string(joint.dim()) + " is not " +
                        std::to_string(dim_first) + " x " + std::to_string(dim_second));
    const auto d1 = static_cast<Eigen::Index>(dim_first);
    const auto d2 = static_cast<Eigen::Index>(dim_second);
    const Eigen::MatrixXcd& r = joint.elements();
    if (keep == Factor::first) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d1, d1);
        for (Eigen::Index i = 0; i < d1; ++i)
            for (Eigen::Index j = 0; j < d1; ++j)
                for (Eigen::Index b = 0; b < d2; ++b)
                    out(i, j) += r(i * d2 + b, j * d2 + b);
        return DensityMatrix(std::move(out));
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d2, d2);
    for (Eigen::Index i = 0; i < d2; ++i)
        for (Eigen::Index j = 0; j < d2; ++j)
            for (Eigen::Index a = 0; a < d1; ++a)
                out(i, j) += r(a * d2 + i, a * d2 + j);
    return DensityMatrix(std::move(out));
}

/// Born-rule probabilities Tr(rho E_i) for an effect set (a POVM).
inline std::vector<double> registration_probabilities(const DensityMatrix& rho,
                                                      const std::vector<Eigen::MatrixXcd>& effects) {
    if (effects.empty())
        throw error(errc::invalid_effects, "effect set is empty");
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& e : effects) {
        if (e.rows() != d || e.cols() != d)
            throw error(errc::invalid_effects, "effect dimension does not match the state");
        if (detail::hermiticity_defect(e) > spectral_tol || detail::min_eigenvalue(e) < -spectral_tol)
            throw error(errc::invalid_effects, "effect is not positive semidefinite");
        total += e;
    }
    if (detail::max_abs(total - Eigen::MatrixXcd::Identity(d, d)) > spectral_tol)
        throw error(errc::invalid_effects, "effects do not sum to the identity");

    std::vector<double> probabilities;
    probabilities.reserve(effects.size());
    for (const auto& e : effects)
        probabilities.push_back(std::max(0.0, (rho.elements() * e).trace().real()));
    return probabilities;
}

inline Decomposition evolve_proper_mixture(const Decomposition& decomp,
                                           const Eigen::MatrixXcd& unitary) {
    const auto d = static_cast<Eigen::Index>(decomp.dim());
    if (unitary.rows() != d || unitary.cols() != d)
        throw error(errc::dimension_mismatch, "unitary does not act on the ensemble space");
    if (detail::max_abs(unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(d, d)) > spectral_tol)
        throw error(errc::non_unitary, "evolution operator is not unitary");
    std::vector<Eigen::VectorXcd> evolved;
    evolved.reserve(decomp.size());
    for (const auto& s : decomp.states())
        evolved.push_back(unitary * s);
    return Decomposition(decomp.weights(), std::move(evolved));
}

// Random instances. All draws come from a caller-owned std::mt19937_64.

inline Eigen::MatrixXcd random_gaussian_matrix(std::size_t rows, std::size_t cols,
                                               std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            m(i, j) = cplx(normal(rng), normal(rng));
    return m;
}

/// Haar-distributed unit vector.
inline Eigen::VectorXcd random_state(std::size_t dim, std::mt19937_64& rng) {
    Eigen::VectorXcd v = random_gaussian_matrix(dim, 1, rng).col(0);
    return v / v.norm();
}

/// Haar unitary from the QR decomposition of a Ginibre matrix, with the
/// phases of R's diagonal absorbed.
inline Eigen::MatrixXcd random_unitary(std::size_t dim, std::mt19937_64& rng) {
    const Eigen::MatrixXcd g = random_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const cplx d = r(i, i);
        q.col(i) *= std::abs(d) > 0.0 ? d / std::abs(d) : cplx(1.0, 0.0);
    }
    return q;
}

/// `count` random pure states with random weights.
inline Decomposition random_decomposition(std::size_t dim, std::size_t count,
                                          std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(0.05, 1.0);
    std::vector<double> weights(count);
    double total = 0.0;
    for (auto& w : weights)
        total += (w = uniform(rng));
    for (auto& w : weights)
        w /= total;
    std::vector<Eigen::VectorXcd> states;
    for (std::size_t k = 0; k < count; ++k)
        states.push_back(random_state(dim, rng));
    return Decomposition(std::move(weights), std::move(states));
}

/// Effects E_i = S^{-1/2} G_i G_i^dagger S^{-1/2} with S = sum_i G_i G_i^dagger.
inline std::vector<Eigen::MatrixXcd> random_effect_set(std::size_t dim, std::size_t outcomes,
                                                       std::mt19937_64& rng) {
    if (outcomes < 1)
        throw error(errc::invalid_effects, "need at least one outcome");
    std::vector<Eigen::MatrixXcd> raw;
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 0; i < outcomes; ++i) {
        const Eigen::MatrixXcd g = random_gaussian_matrix(dim, dim, rng);
        raw.push_back(g * g.adjoint());
        total += raw.back();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(total);
    const Eigen::MatrixXcd inv_sqrt = solver.operatorInverseSqrt();
    std::vector<Eigen::MatrixXcd> effects;
    for (const auto& p : raw) {
        Eigen::MatrixXcd e = inv_sqrt * p * inv_sqrt;
        effects.push_back(0.5 * (e + e.adjoint()));
    }
    return effects;
}

/// Another ensemble of the same operator: phi_j = sum_k U_jk sqrt(c_k) psi_k,
/// with weights |phi_j|^2. U must be unitary of size >= the ensemble size;
/// missing ensemble members count as zero vectors.
inline Decomposition unitary_remix(const Decomposition& decomp, const Eigen::MatrixXcd& unitary) {
    const auto K = static_cast<Eigen::Index>(decomp.size());
    const Eigen::Index M = unitary.rows();
    if (unitary.cols() != M || M < K)
        throw error(errc::dimension_mismatch, "remixing unitary must be square and cover the ensemble");
    if (detail::max_abs(unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(M, M)) > spectral_tol)
        throw error(errc::non_unitary, "remixing matrix is not unitary");
    std::vector<double> weights;
    std::vector<Eigen::VectorXcd> states;
    for (Eigen::Index j = 0; j < M; ++j) {
        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(decomp.dim()));
        for (Eigen::Index k = 0; k < K; ++k)
            phi += unitary(j, k) * std::sqrt(decomp.weights()[static_cast<std::size_t>(k)]) *
                   decomp.states()[static_cast<std::size_t>(k)];
        const double w = phi.squaredNorm();
        if (w > 1e-15) {
            weights.push_back(std::min(w, 1.0));
            states.push_back(phi / std::sqrt(w));
        }
    }
    return Decomposition(std::move(weights), std::move(states));
}

struct IndistinguishabilityReport {
    std::size_t trials = 0;
    double max_deviation = 0.0;
    bool indistinguishable = false; ///< max_deviation < 1e-10
};

/// Two ensembles with the same operator give the same statistics for every
/// registration. Checked against `trials` random effect sets of 2..4 outcomes.
inline IndistinguishabilityReport decompositions_indistinguishable(const Decomposition& d1,
                                                                   const Decomposition& d2,
                                                                   std::size_t trials,
                                                                   std::uint64_t seed) {
    if (d1.dim() != d2.dim())
        throw error(errc::dimension_mismatch, "decompositions act on different spaces");
    const DensityMatrix rho1 = proper_mixture(d1);
    const DensityMatrix rho2 = proper_mixture(d2);
    if (rho1.max_abs_difference(rho2) > spectral_tol)
        throw error(errc::distinct_operators,
                    "the two ensembles have different density matrices and are distinguishable");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> outcomes(2, 4);
    IndistinguishabilityReport report;
    report.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto effects = random_effect_set(d1.dim(), outcomes(rng), rng);
        const auto p1 = registration_probabilities(rho1, effects);
        const auto p2 = registration_probabilities(rho2, effects);
        for (std::size_t i = 0; i < p1.size(); ++i)
            report.max_deviation = std::max(report.max_deviation, std::abs(p1[i] - p2[i]));
    }
    report.indistinguishable = report.max_deviation < spectral_tol;
    return report;
}

} // namespace phonon_chain
