#pragma once

#include "aqtsp/evolution/schedule.hpp"
#include "aqtsp/fock/sparse_operator.hpp"

#include <functional>
#include <optional>
#include <string>

namespace aqtsp::bounds {

using evolution::Schedule;
using fock::SparseOperator;

/// Mean and spread of an energy in a fixed state.
struct EnergyMoments {
    double mean = 0.0;
    double spread = 0.0;  // sqrt(<H^2> - <H>^2), clamped at 0
};

/// Exact quadratic forms; psi must be normalized within 1e-10.
EnergyMoments energy_moments(const Vector& psi, const SparseOperator& H);

/// Necessary-time conditions for an interpolation whose initial state is the
/// ground state of H_I with energy 0 (hbar = 1):
///   T_perp   = sqrt(2) / (g_integral * spread)
///   T_forall = 2 / (g_integral * sqrt(spread^2 + mean^2))
/// Either is +inf when its denominator vanishes.
struct CharacteristicTimes {
    double g_integral = 0.0;
    double T_perp = 0.0;
    double T_forall = 0.0;
    bool orthogonal_unreachable = false;  // spread == 0
};

CharacteristicTimes characteristic_times(const EnergyMoments& moments, const Schedule& schedule);

/// Order-of-magnitude TSP estimates with unit prefactors:
///   spread ~ s sqrt((N-1)!) |theta|^N
///   energy ~ s (N-1)! |theta|^{2N}
struct TspEstimates {
    double spread = 0.0;
    double energy = 0.0;
    std::optional<std::string> warning;  // set when |theta| > 0.5
};

TspEstimates tsp_estimates(int n_cities, double theta, double s);

/// Positive root of (N-1)! theta^{2N} = 1.
double theta_for_unit_resource(int n_cities);

/// Integral conditions for a general interpolation H(tau) = f H_I + g H_P
/// run for time T from psi0:
///   int_0^T ||H psi0|| dt          >= 2       (norm condition)
///   int_0^T ||(H - beta) psi0|| dt >= sqrt(2) (shifted condition)
/// Both integrals scale linearly with T at fixed tau-profile, so the
/// minimal T meeting each threshold is the threshold over the unit-T
/// integral.
struct IntegralBounds {
    double T = 0.0;
    double norm_integral = 0.0;     // over [0, T]
    double shifted_integral = 0.0;  // over [0, T]
    bool norm_met = false;
    bool shifted_met = false;
    double T_min_norm = 0.0;
    double T_min_shifted = 0.0;
};

/// beta(tau) defaults to <psi0|H(tau)|psi0>, the pointwise minimizer over
/// constant shifts.
IntegralBounds general_integral_bounds(const SparseOperator& H_I, const SparseOperator& H_P, const Schedule& schedule,
                                       const Vector& psi0, double T,
                                       const std::function<double(double)>& beta = nullptr, double tol = 1e-12);

/// max over tau of <psi0|f H_I + g H_P|psi0> (the duration does not enter).
double max_initial_energy(const Vector& psi0, const SparseOperator& H_I, const SparseOperator& H_P,
                          const Schedule& schedule);

/// Scalar summary attached to every run report.
struct BoundsReport {
    double T_forall = 0.0;
    double T_perp = 0.0;
    double g_integral = 0.0;
    double max_initial_energy = 0.0;
    double mean_energy = 0.0;
    double spread = 0.0;
    double estimate_spread = 0.0;
    double estimate_energy = 0.0;
    double theta_star = 0.0;
    /// Product g_integral * estimate_energy, the scheduled-energy form of
    /// the energy estimate, reported beside the exact maximum.
    double scheduled_energy_estimate = 0.0;
};

/// Key-value JSON with a descriptive label next to each quantity.
std::string to_json(const BoundsReport& report, int indent = 2);

} // namespace aqtsp::bounds
