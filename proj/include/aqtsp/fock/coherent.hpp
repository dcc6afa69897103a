#pragma once

#include "aqtsp/fock/basis.hpp"
#include "aqtsp/common.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aqtsp::fock {

/// Amplitude vector over an enumerated basis.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {}

    const Vector& amplitudes() const { return amplitudes_; }
    Eigen::Index size() const { return amplitudes_.size(); }
    double norm() const { return amplitudes_.norm(); }

private:
    Vector amplitudes_;
};

struct CoherentState {
    StateVector state;               // renormalized to unit norm
    double truncation_weight = 0.0;  // probability mass of the exact state lost to the caps
    std::optional<std::string> warning;
};

/// Default truncation_weight above which a warning is attached.
inline constexpr double default_truncation_warning = 1e-3;

/// Truncated product of canonical coherent states on the link modes with
/// hooker and marker modes in vacuum. `theta` holds one value per link mode.
CoherentState coherent_state(const FockBasis& basis, const std::vector<cplx>& theta,
                             double warn_above = default_truncation_warning);

/// Convenience overload with a uniform displacement on every link mode.
CoherentState coherent_state(const FockBasis& basis, cplx theta,
                             double warn_above = default_truncation_warning);

/// Per-mode retained probability e^{-|theta|^2} sum_{n<=cap} |theta|^{2n}/n!.
double coherent_retained_probability(cplx theta, int cap);

} // namespace aqtsp::fock
