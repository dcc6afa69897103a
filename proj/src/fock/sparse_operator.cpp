#include "aqtsp/fock/sparse_operator.hpp"

#include <algorithm>
#include <cmath>

namespace aqtsp::fock {

namespace {

double max_abs(const SparseOperator::Matrix& m) {
    double r = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseOperator::Matrix::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
}

void require_same_dimension(const SparseOperator& a, const SparseOperator& b, const char* op) {
    if (a.dimension() != b.dimension()) {
        throw ValidationError(std::string("SparseOperator ") + op + ": dimension mismatch " +
                              std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension()));
    }
}

} // namespace

SparseOperator::SparseOperator(Matrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw ValidationError("SparseOperator: matrix must be square");
    }
    matrix_.makeCompressed();
    Matrix diff = matrix_ - Matrix(matrix_.adjoint());
    hermiticity_residual_ = max_abs(diff);
    hermitian_ = hermiticity_residual_ <= hermitian_tolerance;
}

SparseOperator SparseOperator::zero(Eigen::Index dimension) {
    return SparseOperator(Matrix(dimension, dimension));
}

SparseOperator SparseOperator::identity(Eigen::Index dimension) {
    Matrix m(dimension, dimension);
    m.setIdentity();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::diagonal(const RealVector& values) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values[i] != 0.0) t.emplace_back(i, i, values[i]);
    return from_triplets(values.size(), t);
}

SparseOperator SparseOperator::from_triplets(Eigen::Index dimension, const std::vector<Triplet>& triplets) {
    Matrix m(dimension, dimension);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::from_dense(const DenseMatrix& dense, double drop_below) {
    if (dense.rows() != dense.cols()) throw ValidationError("SparseOperator::from_dense: matrix must be square");
    std::vector<Triplet> t;
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
        for (Eigen::Index j = 0; j < dense.cols(); ++j)
            if (std::abs(dense(i, j)) > drop_below) t.emplace_back(i, j, dense(i, j));
    return from_triplets(dense.rows(), t);
}

SparseOperator SparseOperator::adjoint() const {
    return SparseOperator(Matrix(matrix_.adjoint()));
}

Vector SparseOperator::apply(const Vector& v) const {
    if (v.size() != dimension()) {
        throw ValidationError("SparseOperator::apply: vector of size " + std::to_string(v.size()) +
                              " on operator of dimension " + std::to_string(dimension()));
    }
    return matrix_ * v;
}

DenseMatrix SparseOperator::to_dense() const {
    return DenseMatrix(matrix_);
}

cplx SparseOperator::coeff(Eigen::Index row, Eigen::Index col) const {
    return matrix_.coeff(row, col);
}

SparseOperator SparseOperator::restrict_to(const std::vector<Eigen::Index>& indices) const {
    std::vector<Eigen::Index> position(static_cast<std::size_t>(dimension()), -1);
    for (std::size_t k = 0; k < indices.size(); ++k) position[static_cast<std::size_t>(indices[k])] = static_cast<Eigen::Index>(k);
    std::vector<Triplet> t;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        for (Matrix::InnerIterator it(matrix_, indices[k]); it; ++it) {
            const auto col = position[static_cast<std::size_t>(it.col())];
            if (col >= 0) t.emplace_back(static_cast<Eigen::Index>(k), col, it.value());
        }
    }
    return from_triplets(static_cast<Eigen::Index>(indices.size()), t);
}

double SparseOperator::leakage(const std::vector<Eigen::Index>& indices) const {
    std::vector<char> inside(static_cast<std::size_t>(dimension()), 0);
    for (auto i : indices) inside[static_cast<std::size_t>(i)] = 1;
    double sum = 0.0;
    for (Eigen::Index row = 0; row < matrix_.outerSize(); ++row) {
        if (inside[static_cast<std::size_t>(row)]) continue;
        for (Matrix::InnerIterator it(matrix_, row); it; ++it)
            if (inside[static_cast<std::size_t>(it.col())]) sum += std::norm(it.value());
    }
    return std::sqrt(sum);
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
    require_same_dimension(a, b, "+");
    return SparseOperator(SparseOperator::Matrix(a.matrix_ + b.matrix_));
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
    require_same_dimension(a, b, "-");
    return SparseOperator(SparseOperator::Matrix(a.matrix_ - b.matrix_));
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
    require_same_dimension(a, b, "*");
    return SparseOperator(SparseOperator::Matrix(a.matrix_ * b.matrix_));
}

SparseOperator operator*(cplx scale, const SparseOperator& a) {
    return SparseOperator(SparseOperator::Matrix(scale * a.matrix_));
}

double max_abs_difference(const SparseOperator& a, const SparseOperator& b) {
    require_same_dimension(a, b, "difference");
    return max_abs(SparseOperator::Matrix(a.matrix() - b.matrix()));
}

} // namespace aqtsp::fock
