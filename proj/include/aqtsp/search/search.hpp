#pragma once

#include "aqtsp/bounds/bounds.hpp"
#include "aqtsp/evolution/propagate.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aqtsp::search {

using evolution::Schedule;
using fock::SparseOperator;

/// Unstructured search over M items with initial amplitudes c_i and a
/// marked item m (0-based).
struct SearchInstance {
    int M = 2;
    Vector amplitudes;
    int marked = 0;

    static SearchInstance uniform(int M, int marked = 0);
    /// Throws ValidationError unless M >= 2, sum |c_i|^2 = 1 within 1e-12
    /// and the marked index is in range.
    void validate() const;
};

struct SearchHamiltonians {
    SparseOperator H0;  // 1 - |phi0><phi0|
    SparseOperator Hf;  // 1 - |m><m|
};

SearchHamiltonians build_search_hamiltonians(const SearchInstance& instance);

/// Closed forms: mean 1 - |c_m|^2, spread sqrt(|c_m|^2 - |c_m|^4).
bounds::EnergyMoments search_moments(const SearchInstance& instance);

struct SearchRun {
    double T = 0.0;
    double dt = 0.0;
    double success = 0.0;                 // |<m|psi(T)>|^2
    double max_energy = 0.0;              // max_tau <phi0|H(tau)|phi0>
    std::optional<double> first_orthogonal;
    double T_perp = 0.0;
    double subspace_leakage = 0.0;        // max weight outside span{phi0, m}
    double max_drift = 0.0;
};

struct SearchOptions {
    evolution::Stepper stepper = evolution::Stepper::magnus4;
    double orthogonal_tol = 1e-2;
    int sample_stride = 1;
};

SearchRun run_search(const SearchInstance& instance, const Schedule& schedule, double T, double dt,
                     const SearchOptions& options = {});

/// Schedule families indexed by M.
enum class SearchFamily { linear, scaled_sqrt_m, quadratic_boost_sqrt_m, exponential_boost_e_m };

std::string to_string(SearchFamily f);
SearchFamily parse_search_family(const std::string& name);
Schedule family_schedule(SearchFamily family, int M);

/// Least-squares line through (log x, log y).
struct LogLogFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double stderr_exponent = 0.0;
    double ci_low = 0.0;   // 95% Student-t interval on the exponent
    double ci_high = 0.0;
    std::vector<double> residuals;
};

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingPoint {
    int M = 0;
    std::optional<double> T_half;  // first T with success >= target
    double max_energy = 0.0;
    double T_perp = 0.0;
    std::string note;
};

struct ScalingStudy {
    SearchFamily family = SearchFamily::linear;
    double target = 0.5;
    std::vector<ScalingPoint> points;
    std::optional<LogLogFit> time_fit;
    LogLogFit energy_fit;
    LogLogFit t_perp_fit;
};

struct ScalingOptions {
    double target = 0.5;
    /// dt / T stays fixed across the bisection so discretization error is
    /// comparable between M.
    double dt_over_T = 1.0 / 400.0;
    double T_start = 0.25;
    double T_max = 4096.0;
    /// Bisection stops when the bracket is below this relative width.
    double rel_tol = 1e-4;
    evolution::Stepper stepper = evolution::Stepper::magnus4;
};

/// Finds the smallest T on a doubling grid whose success reaches the
/// target, then bisects inside the bracketing doubling interval.
std::optional<double> find_T_half(const SearchInstance& instance, const Schedule& schedule,
                                  const ScalingOptions& options, std::string* note = nullptr);

/// Requires at least 4 values of M spanning at least two octaves.
ScalingStudy scaling_study(const std::vector<int>& Ms, SearchFamily family, const ScalingOptions& options = {});

} // namespace aqtsp::search
