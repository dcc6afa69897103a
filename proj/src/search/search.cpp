#include "aqtsp/search/search.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <sstream>

namespace aqtsp::search {

SearchInstance SearchInstance::uniform(int M, int marked) {
    if (M < 2) throw ValidationError("search instance needs M >= 2, got " + std::to_string(M));
    SearchInstance s;
    s.M = M;
    s.amplitudes = Vector::Constant(M, 1.0 / std::sqrt(static_cast<double>(M)));
    s.marked = marked;
    s.validate();
    return s;
}

void SearchInstance::validate() const {
    if (M < 2) throw ValidationError("search instance needs M >= 2, got " + std::to_string(M));
    if (amplitudes.size() != M) {
        throw ValidationError("search instance has " + std::to_string(amplitudes.size()) + " amplitudes for M = " +
                              std::to_string(M));
    }
    if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "search amplitudes must be normalized (sum |c|^2 = " << amplitudes.squaredNorm() << ")";
        throw ValidationError(os.str());
    }
    if (marked < 0 || marked >= M) throw ValidationError("marked index " + std::to_string(marked) + " out of range");
}

SearchHamiltonians build_search_hamiltonians(const SearchInstance& instance) {
    instance.validate();
    const DenseMatrix id = DenseMatrix::Identity(instance.M, instance.M);
    const DenseMatrix h0 = id - instance.amplitudes * instance.amplitudes.adjoint();
    DenseMatrix hf = id;
    hf(instance.marked, instance.marked) = 0.0;
    // Hermitize the rank-one term exactly so the flag holds bit-for-bit.
    const DenseMatrix h0h = 0.5 * (h0 + h0.adjoint());
    return {SparseOperator::from_dense(h0h), SparseOperator::from_dense(hf)};
}

bounds::EnergyMoments search_moments(const SearchInstance& instance) {
    instance.validate();
    const double p = std::norm(instance.amplitudes[instance.marked]);
    return {1.0 - p, std::sqrt(std::max(0.0, p - p * p))};
}

SearchRun run_search(const SearchInstance& instance, const Schedule& schedule, double T, double dt,
                     const SearchOptions& options) {
    const auto h = build_search_hamiltonians(instance);
    const Vector& phi0 = instance.amplitudes;

    // Orthonormal basis of span{phi0, m}.
    Vector e_m = Vector::Zero(instance.M);
    e_m[instance.marked] = 1.0;
    DenseMatrix span(instance.M, 0);
    {
        Vector a = phi0;
        Vector b = e_m - a * a.dot(e_m);
        span.resize(instance.M, b.norm() > 1e-12 ? 2 : 1);
        span.col(0) = a;
        if (span.cols() == 2) span.col(1) = b / b.norm();
    }

    SearchRun run;
    run.T = T;
    run.dt = dt;
    evolution::EvolveOptions opt;
    opt.dt = dt;
    opt.stepper = options.stepper;
    opt.sample_stride = options.sample_stride;
    opt.observer = [&](double, const Vector& psi) {
        const Vector inside = span * (span.adjoint() * psi);
        run.subspace_leakage = std::max(run.subspace_leakage, (psi - inside).squaredNorm());
    };
    const auto res = evolution::evolve(h.H0, h.Hf, schedule, T, phi0, opt);
    run.success = std::norm(res.final_state[instance.marked]);
    run.max_energy = res.max_initial_energy;
    run.first_orthogonal = evolution::first_orthogonal_time(res, options.orthogonal_tol);
    run.T_perp = bounds::characteristic_times(search_moments(instance), schedule).T_perp;
    run.max_drift = res.max_drift;
    return run;
}

std::string to_string(SearchFamily f) {
    switch (f) {
    case SearchFamily::linear: return "linear";
    case SearchFamily::scaled_sqrt_m: return "scaled_sqrt_m";
    case SearchFamily::quadratic_boost_sqrt_m: return "quadratic_boost_sqrt_m";
    case SearchFamily::exponential_boost_e_m: return "exponential_boost_e_m";
    }
    return "linear";
}

SearchFamily parse_search_family(const std::string& name) {
    for (auto f : {SearchFamily::linear, SearchFamily::scaled_sqrt_m, SearchFamily::quadratic_boost_sqrt_m,
                   SearchFamily::exponential_boost_e_m})
        if (to_string(f) == name) return f;
    throw ValidationError("unknown schedule family '" + name +
                          "' (linear | scaled_sqrt_m | quadratic_boost_sqrt_m | exponential_boost_e_m)");
}

Schedule family_schedule(SearchFamily family, int M) {
    if (M < 2) throw ValidationError("schedule family needs M >= 2, got " + std::to_string(M));
    const double r = std::sqrt(static_cast<double>(M));
    switch (family) {
    case SearchFamily::linear: return Schedule::linear();
    case SearchFamily::scaled_sqrt_m: return Schedule::scaled(r);
    case SearchFamily::quadratic_boost_sqrt_m: return Schedule::quadratic_boost(r);
    case SearchFamily::exponential_boost_e_m:
        if (M > 12) throw ValidationError("exponential boost is limited to M <= 12 (K = e^M), got M = " + std::to_string(M));
        return Schedule::exponential_boost(std::exp(static_cast<double>(M)));
    }
    return Schedule::linear();
}

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("loglog_fit: need at least two (x, y) pairs");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("loglog_fit: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("loglog_fit: x values must not all coincide");
    LogLogFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.exponent * lx[i]);
        fit.residuals.push_back(r);
        sse += r * r;
    }
    if (n > 2) {
        fit.stderr_exponent = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
        const boost::math::students_t dist(static_cast<double>(n - 2));
        const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
        fit.ci_low = fit.exponent - q * fit.stderr_exponent;
        fit.ci_high = fit.exponent + q * fit.stderr_exponent;
    } else {
        fit.ci_low = fit.ci_high = fit.exponent;
    }
    return fit;
}

std::optional<double> find_T_half(const SearchInstance& instance, const Schedule& schedule,
                                  const ScalingOptions& options, std::string* note) {
    auto success = [&](double T) {
        return run_search(instance, schedule, T, T > 0.0 ? T * options.dt_over_T : 1.0).success;
    };
    if (success(0.0) >= options.target) return 0.0;
    double lo = 0.0;
    double hi = options.T_start;
    while (success(hi) < options.target) {
        lo = hi;
        hi *= 2.0;
        if (hi > options.T_max) {
            if (note) *note = "success never reached the target below T_max";
            return std::nullopt;
        }
    }
    while (hi - lo > options.rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (success(mid) >= options.target ? hi : lo) = mid;
    }
    return hi;
}

ScalingStudy scaling_study(const std::vector<int>& Ms, SearchFamily family, const ScalingOptions& options) {
    if (Ms.size() < 4) throw ValidationError("scaling_study: need at least 4 values of M");
    const auto [lo, hi] = std::minmax_element(Ms.begin(), Ms.end());
    if (*hi < 4 * *lo) throw ValidationError("scaling_study: M values must span at least two octaves");
    ScalingStudy study;
    study.family = family;
    study.target = options.target;
    std::vector<double> xs, ts, xe, es, tp;
    for (int M : Ms) {
        const auto inst = SearchInstance::uniform(M);
        const auto sched = family_schedule(family, M);
        ScalingPoint p;
        p.M = M;
        p.T_half = find_T_half(inst, sched, options, &p.note);
        p.T_perp = bounds::characteristic_times(search_moments(inst), sched).T_perp;
        p.max_energy = evolution::max_combination(sched, 0.0, search_moments(inst).mean).first;
        if (p.T_half && *p.T_half > 0.0) {
            xs.push_back(M);
            ts.push_back(*p.T_half);
        }
        xe.push_back(M);
        es.push_back(p.max_energy);
        tp.push_back(p.T_perp);
        study.points.push_back(p);
    }
    if (xs.size() >= 2) study.time_fit = loglog_fit(xs, ts);
    study.energy_fit = loglog_fit(xe, es);
    study.t_perp_fit = loglog_fit(xe, tp);
    return study;
}

} // namespace aqtsp::search
