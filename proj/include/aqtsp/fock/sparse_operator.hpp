#pragma once

#include "aqtsp/common.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace aqtsp::fock {

/// Tolerance on max |A - A^dagger| for an operator to be flagged hermitian.
inline constexpr double hermitian_tolerance = 1e-12;

/// Immutable sparse complex operator over an enumerated basis.
class SparseOperator {
public:
    using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
    using Triplet = Eigen::Triplet<cplx>;

    SparseOperator() = default;
    explicit SparseOperator(Matrix matrix);

    static SparseOperator zero(Eigen::Index dimension);
    static SparseOperator identity(Eigen::Index dimension);
    static SparseOperator diagonal(const RealVector& values);
    static SparseOperator from_triplets(Eigen::Index dimension, const std::vector<Triplet>& triplets);
    static SparseOperator from_dense(const DenseMatrix& dense, double drop_below = 0.0);

    Eigen::Index dimension() const { return matrix_.rows(); }
    Eigen::Index nonzeros() const { return matrix_.nonZeros(); }
    const Matrix& matrix() const { return matrix_; }

    bool hermitian() const { return hermitian_; }
    /// max |A - A^dagger| over all entries.
    double hermiticity_residual() const { return hermiticity_residual_; }

    SparseOperator adjoint() const;
    Vector apply(const Vector& v) const;
    DenseMatrix to_dense() const;

    /// Entry lookup (zero when not stored).
    cplx coeff(Eigen::Index row, Eigen::Index col) const;

    /// Principal submatrix on the given (sorted) basis indices.
    SparseOperator restrict_to(const std::vector<Eigen::Index>& indices) const;

    /// Norm of the part of A that maps span(indices) outside of it; zero
    /// means the subspace is invariant.
    double leakage(const std::vector<Eigen::Index>& indices) const;

    friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
    friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
    friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
    friend SparseOperator operator*(cplx scale, const SparseOperator& a);
    friend SparseOperator operator*(const SparseOperator& a, cplx scale) { return scale * a; }

private:
    Matrix matrix_;
    bool hermitian_ = true;
    double hermiticity_residual_ = 0.0;
};

/// Max entrywise |A - B|; throws on dimension mismatch.
double max_abs_difference(const SparseOperator& a, const SparseOperator& b);

} // namespace aqtsp::fock
