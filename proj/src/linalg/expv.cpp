#include "aqtsp/linalg/expv.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace aqtsp::linalg {

namespace {

// exp(-i t T) e_1 for the real symmetric tridiagonal T = tridiag(beta, alpha, beta).
Vector tridiagonal_exp_e1(const std::vector<double>& alpha, const std::vector<double>& beta, double t) {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag(m);
    Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i < m; ++i) diag[i] = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = es.eigenvectors();
    const Eigen::VectorXd& w = es.eigenvalues();
    Vector phase(m);
    for (Eigen::Index j = 0; j < m; ++j) phase[j] = std::exp(cplx(0.0, -t * w[j])) * q(0, j);
    return q.cast<cplx>() * phase;
}

struct KrylovTry {
    bool accepted = false;
    Vector result;
    double error = 0.0;
};

KrylovTry krylov_step(const MatVec& matvec, const Vector& w, double t, double tol, int max_krylov, ExpvStats& stats) {
    KrylovTry out;
    const double beta0 = w.norm();
    if (beta0 == 0.0) {
        out.accepted = true;
        out.result = w;
        return out;
    }
    const Eigen::Index n = w.size();
    const int m_max = static_cast<int>(std::min<Eigen::Index>(max_krylov, n));
    std::vector<Vector> basis;
    basis.reserve(static_cast<std::size_t>(m_max) + 1);
    basis.push_back(w / beta0);
    std::vector<double> alpha;
    std::vector<double> beta;
    Vector u(n);

    for (int j = 0; j < m_max; ++j) {
        matvec(basis.back(), u);
        ++stats.matvecs;
        const double a = basis.back().dot(u).real();
        alpha.push_back(a);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) u -= b * b.dot(u);
        }
        const double b = u.norm();
        const Vector y = tridiagonal_exp_e1(alpha, beta, t);
        const bool exhausted = (j + 1 == n);
        const double err = beta0 * b * std::abs(y[y.size() - 1]);
        if (b <= 1e-13 * std::max(1.0, std::abs(a)) || exhausted || err <= tol) {
            out.accepted = true;
            out.error = exhausted || b <= 1e-13 ? 0.0 : err;
            out.result = Vector::Zero(n);
            for (std::size_t i = 0; i < basis.size(); ++i) out.result += (beta0 * y[static_cast<Eigen::Index>(i)]) * basis[i];
            return out;
        }
        out.error = err;
        beta.push_back(b);
        basis.push_back(u / b);
    }
    return out;
}

} // namespace

Vector expv_hermitian(const MatVec& matvec, const Vector& v, double h, double tolerance, int max_krylov,
                      ExpvStats* stats) {
    ExpvStats local;
    ExpvStats& st = stats ? *stats : local;
    if (h == 0.0) return v;
    Vector w = v;
    double done = 0.0;
    double step = h;
    int halvings = 0;
    while (std::abs(h - done) > 1e-15 * std::abs(h)) {
        if (std::abs(step) > std::abs(h - done)) step = h - done;
        const double local_tol = tolerance * std::abs(step / h);
        KrylovTry attempt = krylov_step(matvec, w, step, local_tol, max_krylov, st);
        if (!attempt.accepted) {
            step *= 0.5;
            if (++halvings > 60) {
                throw ConvergenceError("expv_hermitian: Krylov step did not converge (error estimate " +
                                       std::to_string(attempt.error) + ")");
            }
            continue;
        }
        w = std::move(attempt.result);
        done += step;
        st.error_estimate += attempt.error;
        ++st.substeps;
    }
    return w;
}

} // namespace aqtsp::linalg
