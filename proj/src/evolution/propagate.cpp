#include "aqtsp/evolution/propagate.hpp"

#include "aqtsp/linalg/expv.hpp"

#include <cmath>
#include <sstream>

namespace aqtsp::evolution {

SubspaceProjector::SubspaceProjector(DenseMatrix basis) : basis_(std::move(basis)) {
    const DenseMatrix gram = basis_.adjoint() * basis_;
    idempotency_error_ =
        (gram - DenseMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (basis_.cols() == 0) idempotency_error_ = 0.0;
    if (idempotency_error_ > 1e-10) {
        std::ostringstream os;
        os << "SubspaceProjector: basis is not orthonormal (max |B^+B - 1| = " << idempotency_error_ << ")";
        throw ValidationError(os.str());
    }
}

SubspaceProjector SubspaceProjector::from_indices(Eigen::Index dimension, const std::vector<Eigen::Index>& indices) {
    DenseMatrix b = DenseMatrix::Zero(dimension, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] < 0 || indices[k] >= dimension) throw ValidationError("SubspaceProjector: index out of range");
        b(indices[k], static_cast<Eigen::Index>(k)) = 1.0;
    }
    return SubspaceProjector(std::move(b));
}

Vector SubspaceProjector::apply(const Vector& psi) const {
    if (psi.size() != basis_.rows()) throw ValidationError("SubspaceProjector: dimension mismatch");
    return basis_ * (basis_.adjoint() * psi);
}

double success_probability(const Vector& psi, const SubspaceProjector& projector) {
    return projector.apply(psi).squaredNorm();
}

double success_probability_overlaps(const Vector& psi, const SubspaceProjector& projector) {
    if (psi.size() != projector.dimension()) throw ValidationError("success_probability: dimension mismatch");
    double sum = 0.0;
    for (Eigen::Index k = 0; k < projector.rank(); ++k) sum += std::norm(projector.basis().col(k).dot(psi));
    return sum;
}

std::string to_string(Stepper s) { return s == Stepper::magnus4 ? "magnus4" : "midpoint"; }

Stepper parse_stepper(const std::string& name) {
    if (name == "magnus4") return Stepper::magnus4;
    if (name == "midpoint") return Stepper::midpoint;
    throw ValidationError("unknown stepper '" + name + "' (magnus4 | midpoint)");
}

EvolutionResult evolve(const SparseOperator& H_I, const SparseOperator& H_P, const Schedule& schedule, double T,
                       const Vector& psi0, const EvolveOptions& options, const SubspaceProjector* target) {
    const Eigen::Index dim = H_I.dimension();
    if (H_P.dimension() != dim || psi0.size() != dim) {
        throw ValidationError("evolve: H_I, H_P and psi0 must share one dimension");
    }
    if (!H_I.hermitian() || !H_P.hermitian()) throw ValidationError("evolve: Hamiltonians must be hermitian");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "evolve: psi0 must be normalized (norm " << psi0.norm() << ")";
        throw ValidationError(os.str());
    }
    if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("evolve: T must be finite and >= 0");
    if (!(options.dt > 0.0)) throw ValidationError("evolve: dt must be positive");
    if (options.sample_stride < 1) throw ValidationError("evolve: sample_stride must be >= 1");
    if (target && target->dimension() != dim) throw ValidationError("evolve: projector dimension mismatch");

    EvolutionResult r;
    r.T = T;
    r.dt = options.dt;

    const auto& A = H_I.matrix();
    const auto& B = H_P.matrix();
    Vector tmp(dim);
    double ca = 0.0, cb = 0.0;
    const linalg::MatVec matvec = [&](const Vector& in, Vector& out) {
        out.noalias() = A * in;
        out *= ca;
        tmp.noalias() = B * in;
        out += cb * tmp;
    };

    const double e_i = psi0.dot(H_I.apply(psi0)).real();
    const double e_p = psi0.dot(H_P.apply(psi0)).real();
    r.max_initial_energy = max_combination(schedule, e_i, e_p).first;

    Vector psi = psi0;
    auto record = [&](double t) {
        const double tau = T > 0.0 ? std::min(t / T, 1.0) : 0.0;
        const double ei = psi.dot(H_I.apply(psi)).real();
        const double ep = psi.dot(H_P.apply(psi)).real();
        const double n = psi.norm();
        r.times.push_back(t);
        r.survival.push_back(psi0.dot(psi));
        r.energy.push_back(schedule.f(tau) * ei + schedule.g(tau) * ep);
        r.drift.push_back(std::abs(n - 1.0));
        if (target) r.target_probability.push_back(success_probability(psi, *target));
        if (options.observer) options.observer(t, psi);
        r.max_drift = std::max(r.max_drift, r.drift.back());
        if (r.drift.back() > options.drift_tolerance) {
            std::ostringstream os;
            os << "evolve: norm drift " << r.drift.back() << " exceeds " << options.drift_tolerance << " at t = " << t
               << " with dt = " << options.dt << "; reduce dt or tighten the Krylov tolerance";
            throw ConvergenceError(os.str());
        }
    };
    record(0.0);

    linalg::ExpvStats stats;
    auto exponential = [&](double fa, double gb, double h) {
        ca = fa;
        cb = gb;
        psi = linalg::expv_hermitian(matvec, psi, h, options.krylov_tolerance, options.max_krylov, &stats);
    };

    const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
    const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
    const double a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

    double t = 0.0;
    const long n_steps = T > 0.0 ? static_cast<long>(std::ceil(T / options.dt - 1e-9)) : 0;
    for (long k = 0; k < n_steps; ++k) {
        const double h = (k + 1 == n_steps) ? T - t : options.dt;
        if (options.stepper == Stepper::midpoint) {
            const double tau = (t + 0.5 * h) / T;
            exponential(schedule.f(tau), schedule.g(tau), h);
        } else {
            const double t1 = std::min((t + c1 * h) / T, 1.0);
            const double t2 = std::min((t + c2 * h) / T, 1.0);
            const double f1 = schedule.f(t1), f2 = schedule.f(t2);
            const double g1 = schedule.g(t1), g2 = schedule.g(t2);
            exponential(a2 * f1 + a1 * f2, a2 * g1 + a1 * g2, h);
            exponential(a1 * f1 + a2 * f2, a1 * g1 + a2 * g2, h);
        }
        t = (k + 1 == n_steps) ? T : t + h;
        ++r.steps;
        if ((k + 1) % options.sample_stride == 0 || k + 1 == n_steps) record(t);
    }
    r.matvecs = stats.matvecs;
    r.final_state = psi;
    return r;
}

std::optional<double> first_orthogonal_time(const EvolutionResult& result, double tol) {
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        const double a = std::abs(result.survival[i]);
        if (a > tol) continue;
        if (i == 0) return result.times[0];
        const double prev = std::abs(result.survival[i - 1]);
        const double w = (prev - tol) / (prev - a);
        return result.times[i - 1] + w * (result.times[i] - result.times[i - 1]);
    }
    return std::nullopt;
}

} // namespace aqtsp::evolution
