#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phonon_chain {

enum class errc {
    invalid_params,
    dimension_mismatch,
    missing_transform,
    zero_mode_excluded,
    non_positive_energy,
    no_convergence,
    domain_error,
    mean_zero,
    cutoff_too_small,
    norm_violation,
    invalid_state,
    invalid_effects,
    distinct_operators,
    non_unitary,
    precondition_violated,
};

constexpr std::string_view to_string(errc code) noexcept {
    switch (code) {
    case errc::invalid_params: return "InvalidParams";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::missing_transform: return "MissingTransform";
    case errc::zero_mode_excluded: return "ZeroModeExcluded";
    case errc::non_positive_energy: return "NonPositiveEnergy";
    case errc::no_convergence: return "NoConvergence";
    case errc::domain_error: return "DomainError";
    case errc::mean_zero: return "MeanZero";
    case errc::cutoff_too_small: return "CutoffTooSmall";
    case errc::norm_violation: return "NormViolation";
    case errc::invalid_state: return "InvalidState";
    case errc::invalid_effects: return "InvalidEffects";
    case errc::distinct_operators: return "DistinctOperators";
    case errc::non_unitary: return "NonUnitary";
    case errc::precondition_violated: return "PreconditionViolated";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace phonon_chain
