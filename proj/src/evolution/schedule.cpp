#include "aqtsp/evolution/schedule.hpp"

#include "aqtsp/common.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace aqtsp::evolution {

namespace {

void require_factor(double K, const char* who) {
    if (!std::isfinite(K) || K <= 0.0) {
        throw ValidationError(std::string(who) + ": boost factor must be finite and positive");
    }
}

void require_tau(double tau) {
    if (!(tau >= -1e-12 && tau <= 1.0 + 1e-12)) {
        throw ValidationError("schedule evaluated outside [0, 1]: tau = " + std::to_string(tau));
    }
}

} // namespace

std::string to_string(ScheduleKind k) {
    switch (k) {
    case ScheduleKind::linear: return "linear";
    case ScheduleKind::scaled: return "scaled";
    case ScheduleKind::quadratic_boost: return "quadratic_boost";
    case ScheduleKind::exponential_boost: return "exponential_boost";
    case ScheduleKind::tabulated: return "tabulated";
    }
    return "linear";
}

Schedule Schedule::linear() { return Schedule(ScheduleKind::linear, 1.0); }

Schedule Schedule::scaled(double K) {
    require_factor(K, "scaled");
    return Schedule(ScheduleKind::scaled, K);
}

Schedule Schedule::quadratic_boost(double K) {
    if (!std::isfinite(K) || K < 0.0) throw ValidationError("quadratic_boost: K must be finite and >= 0");
    return Schedule(ScheduleKind::quadratic_boost, K);
}

Schedule Schedule::exponential_boost(double K) {
    require_factor(K, "exponential_boost");
    return Schedule(ScheduleKind::exponential_boost, K);
}

Schedule Schedule::tabulated(std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) throw ValidationError("tabulated schedule needs at least two points");
    if (points.front().first != 0.0 || points.back().first != 1.0) {
        throw ValidationError("tabulated schedule must start at tau = 0 and end at tau = 1");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [tau, g] = points[i];
        if (!std::isfinite(tau) || !std::isfinite(g)) throw ValidationError("tabulated schedule point is not finite");
        if (g < 0.0) throw ValidationError("tabulated schedule has g < 0 at tau = " + std::to_string(tau));
        if (i > 0 && !(tau > points[i - 1].first)) {
            throw ValidationError("tabulated schedule tau values must increase strictly");
        }
    }
    Schedule s(ScheduleKind::tabulated, 1.0);
    s.points_ = std::move(points);
    return s;
}

double Schedule::g(double tau) const {
    require_tau(tau);
    tau = std::clamp(tau, 0.0, 1.0);
    switch (kind_) {
    case ScheduleKind::linear: return tau;
    case ScheduleKind::scaled:
    case ScheduleKind::exponential_boost: return K_ * tau;
    case ScheduleKind::quadratic_boost: return tau + K_ * tau * (1.0 - tau);
    case ScheduleKind::tabulated: {
        auto it = std::upper_bound(points_.begin(), points_.end(), tau,
                                   [](double t, const auto& p) { return t < p.first; });
        if (it == points_.end()) return points_.back().second;
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double w = (tau - lo.first) / (hi.first - lo.first);
        return lo.second + w * (hi.second - lo.second);
    }
    }
    return tau;
}

double Schedule::f(double tau) const {
    require_tau(tau);
    tau = std::clamp(tau, 0.0, 1.0);
    if (kind_ == ScheduleKind::tabulated) return 1.0 - g(tau);
    return 1.0 - tau;
}

double Schedule::g_integral() const {
    switch (kind_) {
    case ScheduleKind::linear: return 0.5;
    case ScheduleKind::scaled:
    case ScheduleKind::exponential_boost: return 0.5 * K_;
    case ScheduleKind::quadratic_boost: return 0.5 + K_ / 6.0;
    case ScheduleKind::tabulated: {
        double sum = 0.0;
        for (std::size_t i = 1; i < points_.size(); ++i)
            sum += 0.5 * (points_[i].first - points_[i - 1].first) * (points_[i].second + points_[i - 1].second);
        return sum;
    }
    }
    return 0.5;
}

double Schedule::g_integral_quadrature(double tol) const {
    return integrate_schedule(*this, [this](double t) { return g(t); }, tol);
}

std::vector<double> Schedule::breakpoints() const {
    if (kind_ != ScheduleKind::tabulated) return {0.0, 1.0};
    std::vector<double> out;
    for (const auto& p : points_) out.push_back(p.first);
    return out;
}

std::string Schedule::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_);
    if (kind_ == ScheduleKind::tabulated) {
        os << "(" << points_.size() << " points)";
    } else if (kind_ != ScheduleKind::linear) {
        os << "(K=" << K_ << ")";
    }
    return os.str();
}

std::pair<double, double> max_combination(const Schedule& schedule, double a, double b, int samples) {
    auto h = [&](double t) { return a * schedule.f(t) + b * schedule.g(t); };
    samples = std::max(samples, 3);
    double best = -std::numeric_limits<double>::infinity();
    int at = 0;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const double v = h(t);
        if (v > best) {
            best = v;
            at = i;
        }
    }
    // Golden-section on the bracketing cell pair.
    double lo = static_cast<double>(std::max(at - 1, 0)) / (samples - 1);
    double hi = static_cast<double>(std::min(at + 1, samples - 1)) / (samples - 1);
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = h(x1);
        }
    }
    double tau = static_cast<double>(at) / (samples - 1);
    for (double t : {x1, x2}) {
        if (h(t) > best) {
            best = h(t);
            tau = t;
        }
    }
    return {best, tau};
}

} // namespace aqtsp::evolution
