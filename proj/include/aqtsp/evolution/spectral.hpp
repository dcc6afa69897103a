#pragma once

#include "aqtsp/evolution/schedule.hpp"
#include "aqtsp/fock/sparse_operator.hpp"
#include "aqtsp/linalg/eigensolver.hpp"

#include <vector>

namespace aqtsp::evolution {

struct SpectralFlow {
    std::vector<double> tau;
    std::vector<RealVector> levels;  // lowest k eigenvalues per sample, ascending
    /// Multiplicity of the lowest level at tau = 1; the gap is measured from
    /// e_0 to e_d with d this multiplicity.
    int ground_multiplicity = 1;
    std::vector<double> gap;  // e_d - e_0 per sample
    double min_gap = 0.0;
    double min_gap_tau = 0.0;
};

/// Lowest-k spectrum of f(tau) H_I + g(tau) H_P on n_samples uniformly spaced
/// points of [0, 1], plus golden-section refinement of the gap minimum.
/// k is raised to ground_multiplicity + 1 when needed.
SpectralFlow spectral_flow(const fock::SparseOperator& H_I, const fock::SparseOperator& H_P, const Schedule& schedule,
                           int n_samples, int k, const linalg::EigenOptions& options = {},
                           double degeneracy_tol = 1e-8);

} // namespace aqtsp::evolution
