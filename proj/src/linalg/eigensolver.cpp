#include "aqtsp/linalg/eigensolver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace aqtsp::linalg {

namespace {

void require_hermitian(const fock::SparseOperator& op, const char* who) {
    if (!op.hermitian()) {
        std::ostringstream os;
        os << who << ": operator is not hermitian (residual " << op.hermiticity_residual() << ")";
        throw ValidationError(os.str());
    }
}

// Orthonormalizes columns [from, end) of V against all earlier columns,
// dropping those that collapse. Returns the new column count.
Eigen::Index orthonormalize(DenseMatrix& v, Eigen::Index from) {
    Eigen::Index keep = from;
    for (Eigen::Index c = from; c < v.cols(); ++c) {
        Vector col = v.col(c);
        const double before = col.norm();
        if (before == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass) {
            if (keep > 0) col -= v.leftCols(keep) * (v.leftCols(keep).adjoint() * col);
        }
        const double after = col.norm();
        if (after <= 1e-10 * before) continue;
        v.col(keep++) = col / after;
    }
    v.conservativeResize(Eigen::NoChange, keep);
    return keep;
}

EigenPairs davidson(const fock::SparseOperator& op, int k, const EigenOptions& opt) {
    const auto& a = op.matrix();
    const Eigen::Index n = op.dimension();
    RealVector diag(n);
    for (Eigen::Index i = 0; i < n; ++i) diag[i] = op.coeff(i, i).real();

    const Eigen::Index block = std::min<Eigen::Index>(n, k + 2);
    const Eigen::Index max_sub = std::max<Eigen::Index>(opt.max_subspace, 3 * block);

    // Start from the unit vectors of the smallest diagonal entries, slightly
    // randomized so symmetric degeneracies do not stall the expansion.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return diag[x] < diag[y]; });
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss;
    DenseMatrix v(n, block);
    for (Eigen::Index c = 0; c < block; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) v(i, c) = cplx(1e-3 * gauss(rng), 0.0);
        v(order[static_cast<std::size_t>(c)], c) += 1.0;
    }
    orthonormalize(v, 0);
    DenseMatrix w = a * v;

    EigenPairs out;
    out.iterative = true;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        out.iterations = it;
        const DenseMatrix h = v.adjoint() * w;
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (h + h.adjoint()));
        const Eigen::Index m = std::min<Eigen::Index>(block, v.cols());
        const DenseMatrix y = es.eigenvectors().leftCols(m);
        const RealVector theta = es.eigenvalues().head(m);
        const DenseMatrix x = v * y;
        const DenseMatrix ax = w * y;
        DenseMatrix r = ax - x * theta.cast<cplx>().asDiagonal();

        RealVector res(m);
        bool converged = true;
        for (Eigen::Index c = 0; c < m; ++c) {
            res[c] = r.col(c).norm();
            if (c < k && res[c] > opt.tolerance * std::max(1.0, std::abs(theta[c]))) converged = false;
        }
        if (converged && m >= k) {
            out.values = theta.head(k);
            out.vectors = x.leftCols(k);
            out.residuals = res.head(k);
            return out;
        }
        if (it == opt.max_iterations) {
            std::ostringstream os;
            os << "davidson: no convergence after " << it << " iterations (worst residual "
               << res.head(std::min<Eigen::Index>(k, m)).maxCoeff() << ", tolerance " << opt.tolerance << ")";
            throw ConvergenceError(os.str());
        }

        // Diagonal-preconditioned corrections for unconverged Ritz pairs.
        DenseMatrix t(n, 0);
        for (Eigen::Index c = 0; c < m; ++c) {
            if (res[c] <= opt.tolerance * std::max(1.0, std::abs(theta[c]))) continue;
            Vector corr(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                double d = diag[i] - theta[c];
                if (std::abs(d) < 1e-8) d = d < 0 ? -1e-8 : 1e-8;
                corr[i] = r(i, c) / d;
            }
            t.conservativeResize(Eigen::NoChange, t.cols() + 1);
            t.col(t.cols() - 1) = corr;
        }

        if (v.cols() + t.cols() > max_sub) {
            // Thick restart on the current Ritz vectors.
            const Eigen::Index keep = std::min<Eigen::Index>(v.cols(), 2 * block);
            const DenseMatrix yk = es.eigenvectors().leftCols(keep);
            v = v * yk;
            w = w * yk;
            orthonormalize(v, 0);
            if (v.cols() != keep) w = a * v;
        }
        const Eigen::Index old = v.cols();
        v.conservativeResize(Eigen::NoChange, old + t.cols());
        v.rightCols(t.cols()) = t;
        const Eigen::Index now = orthonormalize(v, old);
        if (now == old) {
            // Stagnated: inject random directions.
            v.conservativeResize(Eigen::NoChange, old + 1);
            for (Eigen::Index i = 0; i < n; ++i) v(i, old) = cplx(gauss(rng), gauss(rng));
            orthonormalize(v, old);
        }
        w.conservativeResize(Eigen::NoChange, v.cols());
        w.rightCols(v.cols() - old) = a * v.rightCols(v.cols() - old);
    }
    throw ConvergenceError("davidson: iteration limit reached");
}

} // namespace

void fix_phases(DenseMatrix& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        const double big = vectors.col(c).cwiseAbs().maxCoeff();
        if (big == 0.0) continue;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double mag = std::abs(vectors(i, c));
            if (mag > 1e-12 * big) {
                vectors.col(c) *= std::conj(vectors(i, c)) / mag;
                vectors(i, c) = mag;
                break;
            }
        }
    }
}

namespace {

// Full dense diagonalization keeping the lowest `keep` pairs. Real
// operators go through the real solver, which is several times faster.
EigenPairs dense_lowest(const fock::SparseOperator& op, Eigen::Index keep, bool values_only = false) {
    const auto& m = op.matrix();
    bool real = true;
    for (Eigen::Index r = 0; r < m.outerSize() && real; ++r)
        for (fock::SparseOperator::Matrix::InnerIterator it(m, r); it; ++it)
            if (it.value().imag() != 0.0) {
                real = false;
                break;
            }
    EigenPairs out;
    if (values_only) {
        if (real) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense().real(), Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success) throw ConvergenceError("dense_eigenpairs: eigendecomposition failed");
            out.values = es.eigenvalues().head(keep);
        } else {
            Eigen::SelfAdjointEigenSolver<DenseMatrix> es(op.to_dense(), Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success) throw ConvergenceError("dense_eigenpairs: eigendecomposition failed");
            out.values = es.eigenvalues().head(keep);
        }
        return out;
    }
    if (real) {
        const Eigen::MatrixXd a = op.to_dense().real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
        if (es.info() != Eigen::Success) throw ConvergenceError("dense_eigenpairs: eigendecomposition failed");
        out.values = es.eigenvalues().head(keep);
        out.vectors = es.eigenvectors().leftCols(keep).cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(op.to_dense());
        if (es.info() != Eigen::Success) throw ConvergenceError("dense_eigenpairs: eigendecomposition failed");
        out.values = es.eigenvalues().head(keep);
        out.vectors = es.eigenvectors().leftCols(keep);
    }
    fix_phases(out.vectors);
    const DenseMatrix av = m * out.vectors;
    out.residuals = (av - out.vectors * out.values.cast<cplx>().asDiagonal()).colwise().norm().transpose();
    return out;
}

} // namespace

EigenPairs dense_eigenpairs(const fock::SparseOperator& op) {
    require_hermitian(op, "dense_eigenpairs");
    return dense_lowest(op, op.dimension());
}

EigenPairs lowest_eigenpairs(const fock::SparseOperator& op, int k, const EigenOptions& options) {
    require_hermitian(op, "lowest_eigenpairs");
    const Eigen::Index n = op.dimension();
    if (k < 1 || k > n) {
        throw ValidationError("lowest_eigenpairs: requested " + std::to_string(k) + " pairs of a " +
                              std::to_string(n) + "-dimensional operator");
    }
    if (n <= options.dense_threshold) {
        return dense_lowest(op, k, options.values_only);
    }
    EigenPairs out = davidson(op, k, options);
    fix_phases(out.vectors);
    return out;
}

} // namespace aqtsp::linalg
