#pragma once

#include "aqtsp/evolution/schedule.hpp"
#include "aqtsp/fock/sparse_operator.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace aqtsp::evolution {

using fock::SparseOperator;

/// Orthonormal basis of a target subspace; P = B B^dagger.
class SubspaceProjector {
public:
    SubspaceProjector() = default;
    /// Columns must be orthonormal within 1e-10 (||B^dagger B - 1||_max).
    explicit SubspaceProjector(DenseMatrix basis);

    /// Projector onto the span of the given basis states.
    static SubspaceProjector from_indices(Eigen::Index dimension, const std::vector<Eigen::Index>& indices);

    const DenseMatrix& basis() const { return basis_; }
    Eigen::Index rank() const { return basis_.cols(); }
    Eigen::Index dimension() const { return basis_.rows(); }

    /// max |P^2 - P| computed through B^dagger B.
    double idempotency_error() const { return idempotency_error_; }

    Vector apply(const Vector& psi) const;

private:
    DenseMatrix basis_;
    double idempotency_error_ = 0.0;
};

/// ||P psi||^2 through the projected vector.
double success_probability(const Vector& psi, const SubspaceProjector& projector);

/// sum_k |<b_k|psi>|^2 over the orthonormal basis columns.
double success_probability_overlaps(const Vector& psi, const SubspaceProjector& projector);

enum class Stepper {
    magnus4,   // fourth-order commutator-free Magnus, two exponentials per step
    midpoint,  // exponential of the midpoint Hamiltonian, one per step
};

std::string to_string(Stepper s);
Stepper parse_stepper(const std::string& name);

struct EvolveOptions {
    double dt = 0.05;
    /// Record traces every `sample_stride` steps (the final time is always recorded).
    int sample_stride = 1;
    Stepper stepper = Stepper::magnus4;
    double drift_tolerance = 1e-8;
    /// Error budget per exponential.
    double krylov_tolerance = 1e-12;
    int max_krylov = 30;
    /// Called with (t, psi(t)) at every recorded sample.
    std::function<void(double, const Vector&)> observer;
};

struct EvolutionResult {
    double T = 0.0;
    double dt = 0.0;
    std::vector<double> times;
    std::vector<cplx> survival;               // <psi(0)|psi(t)>
    std::vector<double> target_probability;   // empty when no projector was given
    std::vector<double> energy;               // <psi(t)|H(t/T)|psi(t)>
    std::vector<double> drift;                // | ||psi(t)|| - 1 |
    double max_initial_energy = 0.0;          // max_tau <psi0|H(tau)|psi0>
    double max_drift = 0.0;
    long matvecs = 0;
    int steps = 0;
    Vector final_state;
};

/// Integrates i d/dt psi = (f(t/T) H_I + g(t/T) H_P) psi over [0, T].
/// Throws ValidationError for a non-normalized psi0 or bad step data and
/// ConvergenceError when the norm drifts beyond the tolerance.
EvolutionResult evolve(const SparseOperator& H_I, const SparseOperator& H_P, const Schedule& schedule, double T,
                       const Vector& psi0, const EvolveOptions& options = {},
                       const SubspaceProjector* target = nullptr);

/// Earliest sampled time with |<psi(0)|psi(t)>| <= tol, linearly
/// interpolated between samples; nullopt when never reached.
std::optional<double> first_orthogonal_time(const EvolutionResult& result, double tol = 1e-2);

} // namespace aqtsp::evolution
