#include "aqtsp/fock/ladder.hpp"

#include <cmath>

namespace aqtsp::fock {

namespace {

void require_mode(const FockBasis& basis, ModeId mode) {
    if (mode >= basis.registry().mode_count()) {
        throw ValidationError("ladder: unregistered mode " + std::to_string(mode) + " (registry has " +
                              std::to_string(basis.registry().mode_count()) + " modes)");
    }
}

SparseOperator shift_operator(const FockBasis& basis, ModeId mode, int delta) {
    require_mode(basis, mode);
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    std::vector<SparseOperator::Triplet> t;
    t.reserve(basis.dimension());
    for (std::size_t col = 0; col < basis.dimension(); ++col) {
        const int n = basis.occupation(col, mode);
        if (delta < 0 && n == 0) continue;
        const auto row = basis.shifted(col, mode, delta);
        if (!row) continue;
        const double amp = delta > 0 ? std::sqrt(static_cast<double>(n + 1)) : std::sqrt(static_cast<double>(n));
        t.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col), amp);
    }
    return SparseOperator::from_triplets(dim, t);
}

} // namespace

SparseOperator creation(const FockBasis& basis, ModeId mode) {
    return shift_operator(basis, mode, +1);
}

SparseOperator annihilation(const FockBasis& basis, ModeId mode) {
    return shift_operator(basis, mode, -1);
}

SparseOperator number(const FockBasis& basis, ModeId mode) {
    require_mode(basis, mode);
    RealVector n(static_cast<Eigen::Index>(basis.dimension()));
    for (std::size_t i = 0; i < basis.dimension(); ++i) n[static_cast<Eigen::Index>(i)] = basis.occupation(i, mode);
    return SparseOperator::diagonal(n);
}

LadderOps ladder_ops(const FockBasis& basis, ModeId mode) {
    return {creation(basis, mode), annihilation(basis, mode), number(basis, mode)};
}

SparseOperator extend_single_mode(const FockBasis& basis, ModeId mode, const DenseMatrix& local) {
    require_mode(basis, mode);
    const int cap = basis.cutoff().per_mode_max;
    if (local.rows() != cap + 1 || local.cols() != cap + 1) {
        throw ValidationError("extend_single_mode: local matrix must be " + std::to_string(cap + 1) + "x" +
                              std::to_string(cap + 1));
    }
    std::vector<SparseOperator::Triplet> t;
    for (std::size_t col = 0; col < basis.dimension(); ++col) {
        const int n = basis.occupation(col, mode);
        for (int m = 0; m <= cap; ++m) {
            const cplx v = local(m, n);
            if (v == cplx{}) continue;
            const auto row = basis.shifted(col, mode, m - n);
            if (row) t.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col), v);
        }
    }
    return SparseOperator::from_triplets(static_cast<Eigen::Index>(basis.dimension()), t);
}

SparseOperator total_number(const FockBasis& basis, ModeKind kind) {
    const auto& reg = basis.registry();
    RealVector n = RealVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    for (ModeId m = 0; m < reg.mode_count(); ++m) {
        if (reg.kind(m) != kind) continue;
        for (std::size_t i = 0; i < basis.dimension(); ++i) n[static_cast<Eigen::Index>(i)] += basis.occupation(i, m);
    }
    return SparseOperator::diagonal(n);
}

} // namespace aqtsp::fock
