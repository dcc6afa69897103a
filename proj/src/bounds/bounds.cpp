#include "aqtsp/bounds/bounds.hpp"

#include "aqtsp/io/report.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace aqtsp::bounds {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require_normalized(const Vector& psi, const char* who) {
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
        std::ostringstream os;
        os << who << ": state must be normalized (norm " << psi.norm() << ")";
        throw ValidationError(os.str());
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

EnergyMoments energy_moments(const Vector& psi, const SparseOperator& H) {
    require_normalized(psi, "energy_moments");
    if (psi.size() != H.dimension()) throw ValidationError("energy_moments: dimension mismatch");
    const Vector hpsi = H.apply(psi);
    const double mean = psi.dot(hpsi).real();
    const double second = hpsi.squaredNorm();
    return {mean, std::sqrt(std::max(0.0, second - mean * mean))};
}

CharacteristicTimes characteristic_times(const EnergyMoments& moments, const Schedule& schedule) {
    if (!std::isfinite(moments.mean) || !std::isfinite(moments.spread)) {
        throw ValidationError("characteristic_times: moments must be finite");
    }
    CharacteristicTimes t;
    t.g_integral = schedule.g_integral();
    const double dp = t.g_integral * moments.spread;
    const double df = t.g_integral * std::hypot(moments.spread, moments.mean);
    t.orthogonal_unreachable = moments.spread == 0.0;
    t.T_perp = dp > 0.0 ? std::sqrt(2.0) / dp : inf;
    t.T_forall = df > 0.0 ? 2.0 / df : inf;
    return t;
}

TspEstimates tsp_estimates(int n_cities, double theta, double s) {
    if (n_cities < 3) throw ValidationError("tsp_estimates: N must be >= 3");
    const double a = std::abs(theta);
    TspEstimates e;
    const double fact = factorial(n_cities - 1);
    e.spread = s * std::sqrt(fact) * std::pow(a, n_cities);
    e.energy = s * fact * std::pow(a, 2 * n_cities);
    if (a > 0.5) {
        std::ostringstream os;
        os << "|theta| = " << a << " is not small; the estimates assume |theta| << 1";
        e.warning = os.str();
    }
    return e;
}

double theta_for_unit_resource(int n_cities) {
    if (n_cities < 2) throw ValidationError("theta_for_unit_resource: N must be >= 2");
    return std::pow(factorial(n_cities - 1), -1.0 / (2.0 * n_cities));
}

IntegralBounds general_integral_bounds(const SparseOperator& H_I, const SparseOperator& H_P, const Schedule& schedule,
                                       const Vector& psi0, double T, const std::function<double(double)>& beta,
                                       double tol) {
    require_normalized(psi0, "general_integral_bounds");
    if (!(T >= 0.0)) throw ValidationError("general_integral_bounds: T must be >= 0");
    const Vector u = H_I.apply(psi0);
    const Vector w = H_P.apply(psi0);
    // ||(f A + g B - b) psi||^2 expanded in the scalar products below.
    const double uu = u.squaredNorm(), ww = w.squaredNorm(), uw = u.dot(w).real();
    const double pu = psi0.dot(u).real(), pw = psi0.dot(w).real();
    auto norm_sq = [&](double tau, double b) {
        const double f = schedule.f(tau), g = schedule.g(tau);
        const double v = f * f * uu + g * g * ww + 2 * f * g * uw - 2 * b * (f * pu + g * pw) + b * b;
        return std::sqrt(std::max(0.0, v));
    };
    auto shift = [&](double tau) {
        return beta ? beta(tau) : schedule.f(tau) * pu + schedule.g(tau) * pw;
    };
    IntegralBounds r;
    r.T = T;
    const double unit_norm = evolution::integrate_schedule(schedule, [&](double t) { return norm_sq(t, 0.0); }, tol);
    const double unit_shift =
        evolution::integrate_schedule(schedule, [&](double t) { return norm_sq(t, shift(t)); }, tol);
    r.norm_integral = T * unit_norm;
    r.shifted_integral = T * unit_shift;
    r.norm_met = r.norm_integral >= 2.0;
    r.shifted_met = r.shifted_integral >= std::sqrt(2.0);
    r.T_min_norm = unit_norm > 0.0 ? 2.0 / unit_norm : inf;
    r.T_min_shifted = unit_shift > 0.0 ? std::sqrt(2.0) / unit_shift : inf;
    return r;
}

double max_initial_energy(const Vector& psi0, const SparseOperator& H_I, const SparseOperator& H_P,
                          const Schedule& schedule) {
    require_normalized(psi0, "max_initial_energy");
    const double a = psi0.dot(H_I.apply(psi0)).real();
    const double b = psi0.dot(H_P.apply(psi0)).real();
    return evolution::max_combination(schedule, a, b).first;
}

std::string to_json(const BoundsReport& r, int indent) {
    using nlohmann::ordered_json;
    auto item = [](double v, const char* label) {
        ordered_json j;
        j["value"] = io::json_number(v);
        j["label"] = label;
        return j;
    };
    ordered_json doc;
    doc["units"] = "hbar = 1; energies in distance units";
    doc["T_forall"] = item(r.T_forall, "time below which some allowed state stays unreachable, 2/(int g * sqrt(spread^2+E^2))");
    doc["T_perp"] = item(r.T_perp, "orthogonality time bound, sqrt(2)/(int g * spread)");
    doc["g_integral"] = item(r.g_integral, "integral of g over [0,1]");
    doc["max_initial_energy"] = item(r.max_initial_energy, "max over tau of <psi0|H(tau)|psi0>");
    doc["mean_energy"] = item(r.mean_energy, "initial-state mean of the target Hamiltonian");
    doc["spread"] = item(r.spread, "initial-state energy spread of the target Hamiltonian");
    doc["estimate_spread"] = item(r.estimate_spread, "spread estimate s sqrt((N-1)!) |theta|^N");
    doc["estimate_energy"] = item(r.estimate_energy, "energy estimate s (N-1)! |theta|^(2N)");
    doc["scheduled_energy_estimate"] = item(r.scheduled_energy_estimate, "int g times the energy estimate");
    doc["theta_star"] = item(r.theta_star, "unit-resource displacement ((N-1)!)^(-1/(2N))");
    return doc.dump(indent);
}

} // namespace aqtsp::bounds
