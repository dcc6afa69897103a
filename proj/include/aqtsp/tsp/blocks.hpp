#pragma once

#include "aqtsp/tsp/hamiltonians.hpp"

#include <vector>

namespace aqtsp::tsp {

/// One eigenvector of the lowest eigenvalue cluster of H_P.
struct GroundState {
    std::vector<int> links;   // link configuration of its block
    double energy = 0.0;
    double hm_weight = 0.0;   // probability outside the hooker/marker vacuum
};

/// Exact ground-space analysis of H_P, one link-configuration block at a time.
struct GroundSpaceReport {
    double min_eigenvalue = 0.0;
    double first_excited = 0.0;       // lowest eigenvalue above the ground cluster
    std::vector<GroundState> ground;  // one entry per ground-cluster eigenvector
    std::size_t blocks = 0;
    double max_off_block = 0.0;       // largest |H_P| entry coupling different blocks
    /// Lowest eigenvalue among eigenvectors with hm_weight > 1/2; tests the
    /// claim that such states only sit higher in the spectrum.
    double lowest_hm_excited = 0.0;

    std::size_t degeneracy() const { return ground.size(); }
};

/// Splits an assembled H_P into link blocks (checking that nothing couples
/// them) and diagonalizes each block densely.
GroundSpaceReport ground_space_from_operator(const SparseOperator& H_P, const FockBasis& basis,
                                             double cluster_tol = 1e-9);

/// Builds each block of H_P directly from the filter factors restricted to
/// the block, never forming the full operator. Gives the same blocks as the
/// assembled operator on the same basis.
GroundSpaceReport ground_space_blockwise(const TspInstance& instance, const FockBasis& basis, PenaltyVariant variant,
                                         double s, double cluster_tol = 1e-9);

} // namespace aqtsp::tsp
