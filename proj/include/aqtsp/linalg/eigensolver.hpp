#pragma once

#include "aqtsp/fock/sparse_operator.hpp"

#include <cstdint>

namespace aqtsp::linalg {

struct EigenOptions {
    /// Dimensions up to this size are diagonalized densely.
    Eigen::Index dense_threshold = 1500;
    /// Residual tolerance ||A x - lambda x|| <= tol * max(1, |lambda|).
    double tolerance = 1e-10;
    int max_iterations = 2000;
    /// Davidson search-space ceiling before a thick restart.
    int max_subspace = 96;
    std::uint64_t seed = 0x5eed;
    /// Dense path only: skip eigenvectors (vectors and residuals come back empty).
    bool values_only = false;
};

struct EigenPairs {
    RealVector values;     // ascending
    DenseMatrix vectors;   // columns, unit norm, first significant amplitude real positive
    RealVector residuals;  // ||A x - lambda x|| per pair
    bool iterative = false;
    int iterations = 0;
};

/// Lowest `k` eigenpairs of a hermitian operator. Dense below the
/// threshold, block Davidson with a diagonal preconditioner above it.
/// Throws ConvergenceError (with the worst residual) on failure.
EigenPairs lowest_eigenpairs(const fock::SparseOperator& op, int k, const EigenOptions& options = {});

/// Full dense spectrum of a hermitian operator.
EigenPairs dense_eigenpairs(const fock::SparseOperator& op);

/// Rotates each column so its first entry with |v_i| > 1e-12 * max|v| is real positive.
void fix_phases(DenseMatrix& vectors);

} // namespace aqtsp::linalg
