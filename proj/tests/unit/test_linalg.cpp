#include "aqtsp/linalg/eigensolver.hpp"
#include "aqtsp/linalg/expv.hpp"

#include <doctest.h>

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

using namespace aqtsp;
using fock::SparseOperator;

namespace {

// Sparse random hermitian matrix with a spread-out diagonal.
SparseOperator random_hermitian(int n, unsigned seed, bool real = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<SparseOperator::Triplet> t;
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, cplx(0.01 * i + 0.1 * gauss(rng)));
    for (int k = 0; k < 4 * n; ++k) {
        const int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const cplx v(gauss(rng), real ? 0.0 : gauss(rng));
        t.emplace_back(i, j, 0.1 * v);
        t.emplace_back(j, i, 0.1 * std::conj(v));
    }
    return SparseOperator::from_triplets(n, t);
}

} // namespace

TEST_CASE("dense eigenpairs") {
    const auto op = random_hermitian(60, 1);
    const auto ep = linalg::dense_eigenpairs(op);
    CHECK(ep.values.size() == 60);
    for (Eigen::Index i = 1; i < ep.values.size(); ++i) CHECK(ep.values[i] >= ep.values[i - 1]);
    CHECK(ep.residuals.maxCoeff() < 1e-10);
    const DenseMatrix gram = ep.vectors.adjoint() * ep.vectors;
    CHECK((gram - DenseMatrix::Identity(60, 60)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("values-only path agrees") {
    const auto op = random_hermitian(80, 2, true);
    linalg::EigenOptions opt;
    opt.values_only = true;
    const auto a = linalg::lowest_eigenpairs(op, 5, opt);
    const auto b = linalg::lowest_eigenpairs(op, 5);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(a.vectors.size() == 0);
}

TEST_CASE("Davidson matches dense") {
    const auto op = random_hermitian(400, 3);
    linalg::EigenOptions opt;
    opt.dense_threshold = 100;
    const auto it = linalg::lowest_eigenpairs(op, 4, opt);
    const auto ex = linalg::dense_eigenpairs(op);
    CHECK(it.iterative);
    for (int k = 0; k < 4; ++k) CHECK(it.values[k] == doctest::Approx(ex.values[k]).epsilon(1e-9));
    CHECK(it.residuals.maxCoeff() <= 1e-9);
}

TEST_CASE("Davidson is deterministic for a fixed seed") {
    const auto op = random_hermitian(300, 4);
    linalg::EigenOptions opt;
    opt.dense_threshold = 50;
    const auto a = linalg::lowest_eigenpairs(op, 3, opt);
    const auto b = linalg::lowest_eigenpairs(op, 3, opt);
    CHECK((a.vectors - b.vectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("phase convention") {
    DenseMatrix v(3, 2);
    v << cplx(0, 0), cplx(0, -2), cplx(0, 1), cplx(1, 0), cplx(1, 1), cplx(0, 0);
    linalg::fix_phases(v);
    CHECK(v(1, 0).imag() == 0.0);
    CHECK(v(1, 0).real() > 0.0);
    CHECK(v(0, 1).real() == doctest::Approx(2.0));
}

TEST_CASE("non-hermitian input is rejected") {
    std::vector<SparseOperator::Triplet> t{{0, 1, cplx(1.0)}};
    const auto op = SparseOperator::from_triplets(2, t);
    CHECK_THROWS_AS(linalg::lowest_eigenpairs(op, 1), ValidationError);
    CHECK_THROWS_AS(linalg::lowest_eigenpairs(SparseOperator::identity(3), 4), ValidationError);
}

TEST_CASE("Krylov exponential") {
    const auto op = random_hermitian(120, 5);
    const DenseMatrix dense = op.to_dense();
    Vector v = Vector::Random(120);
    v.normalize();
    const linalg::MatVec mv = [&](const Vector& in, Vector& out) { out = op.matrix() * in; };
    for (double h : {0.01, 1.0, 25.0}) {
        linalg::ExpvStats stats;
        const Vector got = linalg::expv_hermitian(mv, v, h, 1e-12, 30, &stats);
        const DenseMatrix u = (cplx(0.0, -h) * dense).exp();
        CHECK((got - u * v).norm() < 1e-9);
        CHECK(std::abs(got.norm() - 1.0) < 1e-12);
        CHECK(stats.matvecs > 0);
    }
    CHECK((linalg::expv_hermitian(mv, v, 0.0) - v).norm() == 0.0);
}
