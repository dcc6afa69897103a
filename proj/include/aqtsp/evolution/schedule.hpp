#pragma once

#include <string>
#include <utility>
#include <vector>

namespace aqtsp::evolution {

enum class ScheduleKind { linear, scaled, quadratic_boost, exponential_boost, tabulated };

std::string to_string(ScheduleKind k);

/// Interpolation H(tau) = f(tau) H_I + g(tau) H_P on tau in [0, 1].
///
///   linear              f = 1 - tau, g = tau
///   scaled(K)           f = 1 - tau, g = K tau
///   quadratic_boost(K)  f = 1 - tau, g = tau + K tau (1 - tau)
///   exponential_boost(K) f = 1 - tau, g = K tau   (K = e^M in the search bench)
///   tabulated           g piecewise linear through the given points, f = 1 - g
///
/// The boosted kinds rescale g only, so f + g = 1 no longer holds for them.
class Schedule {
public:
    static Schedule linear();
    static Schedule scaled(double K);
    static Schedule quadratic_boost(double K);
    static Schedule exponential_boost(double K);
    /// Points (tau, g) with tau strictly increasing from 0 to 1 and g >= 0.
    static Schedule tabulated(std::vector<std::pair<double, double>> points);

    ScheduleKind kind() const { return kind_; }
    double K() const { return K_; }
    const std::vector<std::pair<double, double>>& points() const { return points_; }

    double f(double tau) const;
    double g(double tau) const;

    /// Closed-form integral of g over [0, 1] (trapezoid rule for tabulated,
    /// which is exact for piecewise-linear g).
    double g_integral() const;

    /// Adaptive Gauss-Kronrod integral of g, independent of the closed form.
    double g_integral_quadrature(double tol = 1e-13) const;

    /// Points where f or g may have a kink; quadratures split there.
    std::vector<double> breakpoints() const;

    std::string describe() const;

private:
    Schedule(ScheduleKind kind, double K) : kind_(kind), K_(K) {}

    ScheduleKind kind_;
    double K_ = 1.0;
    std::vector<std::pair<double, double>> points_;
};

/// Adaptive 7-15 Gauss-Kronrod quadrature of `fn` over [a, b].
template <class Fn>
double integrate(Fn&& fn, double a, double b, double tol = 1e-12, int depth = 40);

/// Integral over [0, 1] split at the schedule breakpoints.
template <class Fn>
double integrate_schedule(const Schedule& schedule, Fn&& fn, double tol = 1e-12);

/// max over tau in [0, 1] of a f(tau) + b g(tau): a dense scan followed by
/// golden-section refinement around the best sample. Returns (value, tau).
std::pair<double, double> max_combination(const Schedule& schedule, double a, double b, int samples = 2001);

} // namespace aqtsp::evolution

#include "aqtsp/evolution/quadrature.ipp"
