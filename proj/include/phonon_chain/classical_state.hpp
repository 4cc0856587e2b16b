#pragma once

/// @file
///
/// Classical states as equivalence classes of quantum states.
///
/// Given designated observables a_1..a_n, the state coordinates of rho are the
/// means Tr(rho a_k) and spreads sqrt(Tr(rho a_k^2) - Tr(rho a_k)^2). A classical
/// state is the set of all rho whose coordinates take prescribed values A_k and
/// Delta A_k. Exact equality is replaced by caller-supplied tolerances, so
/// `same_class` is reflexive and symmetric but only approximately transitive.
///
/// Superposing two classes through representatives is generally not well
/// defined: different representatives of the same classes can give
/// superpositions that land in different classes.

#include <phonon_chain/error.hpp>
#include <phonon_chain/measurement_model.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace phonon_chain {

struct ClassTolerances {
    double mean = 1e-8;
    double spread = 1e-8;
};

struct ClassicalCoordinates {
    std::vector<double> means;
    std::vector<double> spreads;
};

struct ClassicalStateSpec {
    std::vector<Eigen::MatrixXcd> observables;
    std::vector<double> targets; ///< A_k
    std::vector<double> spreads; ///< Delta A_k
    ClassTolerances tolerances;

    void validate() const {
        if (observables.empty())
            throw error(errc::invalid_params, "a classical state needs at least one observable");
        if (targets.size() != observables.size() || spreads.size() != observables.size())
            throw error(errc::dimension_mismatch, "need one target and one spread per observable");
        for (double s : spreads)
            if (!(s >= 0.0))
                throw error(errc::invalid_params, "spreads must be nonnegative");
        if (!(tolerances.mean > 0.0) || !(tolerances.spread > 0.0))
            throw error(errc::invalid_params, "tolerances must be positive");
    }
};

namespace detail {

inline void require_observables(std::size_t dim, const std::vector<Eigen::MatrixXcd>& observables) {
    for (const auto& a : observables) {
        if (static_cast<std::size_t>(a.rows()) != dim || static_cast<std::size_t>(a.cols()) != dim)
            throw error(errc::dimension_mismatch, "observable dimension does not match the state");
        if (hermiticity_defect(a) > algebraic_tol)
            throw error(errc::invalid_params, "observable is not Hermitian");
    }
}

} // namespace detail

inline ClassicalCoordinates classical_coordinates(const DensityMatrix& rho,
                                                  const std::vector<Eigen::MatrixXcd>& observables) {
    detail::require_observables(rho.dim(), observables);
    ClassicalCoordinates coords;
    const auto d = static_cast<Eigen::Index>(rho.dim());
    for (const auto& a : observables) {
        const double mean = (rho.elements() * a).trace().real();
        // centred form keeps eigenstates at exactly zero where arithmetic allows
        const Eigen::MatrixXcd shifted = a - mean * Eigen::MatrixXcd::Identity(d, d);
        double variance = (rho.elements() * shifted * shifted).trace().real();
        if (variance < 0.0) {
            if (variance < -spectral_tol)
                throw error(errc::invalid_state, "negative variance " + std::to_string(variance));
            variance = 0.0;
        }
        coords.means.push_back(mean);
        coords.spreads.push_back(std::sqrt(variance));
    }
    return coords;
}

inline bool coordinates_match(const ClassicalCoordinates& x, const ClassicalCoordinates& y,
                              const ClassTolerances& tol) {
    if (x.means.size() != y.means.size())
        throw error(errc::dimension_mismatch, "coordinate arrays differ in length");
    for (std::size_t k = 0; k < x.means.size(); ++k) {
        if (!(std::abs(x.means[k] - y.means[k]) <= tol.mean))
            return false;
        if (!(std::abs(x.spreads[k] - y.spreads[k]) <= tol.spread))
            return false;
    }
    return true;
}

inline bool in_class(const DensityMatrix& rho, const ClassicalStateSpec& spec) {
    spec.validate();
    return coordinates_match(classical_coordinates(rho, spec.observables),
                             ClassicalCoordinates{spec.targets, spec.spreads}, spec.tolerances);
}

inline bool same_class(const DensityMatrix& rho, const DensityMatrix& sigma,
                       const std::vector<Eigen::MatrixXcd>& observables,
                       const ClassTolerances& tolerances = {}) {
    if (rho.dim() != sigma.dim())
        throw error(errc::dimension_mismatch, "states act on different spaces");
    return coordinates_match(classical_coordinates(rho, observables),
                             classical_coordinates(sigma, observables), tolerances);
}

struct SuperpositionProbe {
    bool same_class = false;
    ClassicalCoordinates first;  ///< coordinates of c|a> + d|b>
    ClassicalCoordinates second; ///< coordinates of c|a'> + d|b'>
};

/// Compares c|a> + d|b> with c|a'> + d|b'>, where a ~ a' and b ~ b' are
/// representatives of the same two classes. Both superpositions are
/// normalized before comparison.
inline SuperpositionProbe superposition_class_probe(const Eigen::VectorXcd& a,
                                                    const Eigen::VectorXcd& a_prime,
                                                    const Eigen::VectorXcd& b,
                                                    const Eigen::VectorXcd& b_prime, cplx c, cplx d,
                                                    const std::vector<Eigen::MatrixXcd>& observables,
                                                    const ClassTolerances& tolerances = {}) {
    if (std::abs(std::norm(c) + std::norm(d) - 1.0) > algebraic_tol)
        throw error(errc::norm_violation, "superposition amplitudes must satisfy |c|^2 + |d|^2 = 1");
    const auto pa = DensityMatrix::from_pure(a);
    const auto pa2 = DensityMatrix::from_pure(a_prime);
    const auto pb = DensityMatrix::from_pure(b);
    const auto pb2 = DensityMatrix::from_pure(b_prime);
    if (!same_class(pa, pa2, observables, tolerances) ||
        !same_class(pb, pb2, observables, tolerances))
        throw error(errc::precondition_violated,
                    "representatives a, a' (or b, b') are not in the same class");

    auto superpose = [&](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
        Eigen::VectorXcd s = c * x + d * y;
        const double n = s.norm();
        if (!(n > 0.0))
            throw error(errc::precondition_violated, "superposition vanishes");
        return DensityMatrix::from_pure(s / n);
    };

    SuperpositionProbe probe;
    probe.first = classical_coordinates(superpose(a, b), observables);
    probe.second = classical_coordinates(superpose(a_prime, b_prime), observables);
    probe.same_class = coordinates_match(probe.first, probe.second, tolerances);
    return probe;
}

struct PhaseSearchReport {
    std::size_t trials = 0;
    std::size_t same_class_count = 0;
    double fraction() const noexcept {
        return trials == 0 ? 0.0 : static_cast<double>(same_class_count) / static_cast<double>(trials);
    }
};

/// Draws representatives a' = e^{i phi} a and b' = e^{i theta} b, which are
/// always class-equivalent to a and b, and counts how often the two
/// superpositions still share a class.
inline PhaseSearchReport superposition_phase_search(const Eigen::VectorXcd& a,
                                                    const Eigen::VectorXcd& b, cplx c, cplx d,
                                                    const std::vector<Eigen::MatrixXcd>& observables,
                                                    const ClassTolerances& tolerances,
                                                    std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    PhaseSearchReport report;
    report.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const Eigen::VectorXcd a2 = std::polar(1.0, phase(rng)) * a;
        const Eigen::VectorXcd b2 = std::polar(1.0, phase(rng)) * b;
        if (superposition_class_probe(a, a2, b, b2, c, d, observables, tolerances).same_class)
            ++report.same_class_count;
    }
    return report;
}

} // namespace phonon_chain
