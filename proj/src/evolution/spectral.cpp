#include "aqtsp/evolution/spectral.hpp"

#include <cmath>
#include <limits>

namespace aqtsp::evolution {

SpectralFlow spectral_flow(const fock::SparseOperator& H_I, const fock::SparseOperator& H_P, const Schedule& schedule,
                           int n_samples, int k, const linalg::EigenOptions& options, double degeneracy_tol) {
    if (k < 2) throw ValidationError("spectral_flow: k must be >= 2");
    if (n_samples < 2) throw ValidationError("spectral_flow: need at least 2 samples");
    if (H_I.dimension() != H_P.dimension()) throw ValidationError("spectral_flow: dimension mismatch");
    const int dim = static_cast<int>(H_I.dimension());
    linalg::EigenOptions opts = options;
    opts.values_only = true;

    auto at = [&](double tau) {
        return cplx(schedule.f(tau)) * H_I + cplx(schedule.g(tau)) * H_P;
    };

    SpectralFlow out;
    // Ground multiplicity from the endpoint.
    {
        const int probe = std::min(dim, std::max(k, 8));
        const auto end = linalg::lowest_eigenpairs(at(1.0), probe, opts).values;
        int d = 1;
        const double scale = std::max(1.0, std::abs(end[0]));
        while (d < end.size() && end[d] - end[0] <= degeneracy_tol * scale) ++d;
        if (d == end.size() && d < dim) {
            throw ConvergenceError("spectral_flow: ground multiplicity exceeds the probed " + std::to_string(probe) +
                                   " levels");
        }
        out.ground_multiplicity = d;
        k = std::min(dim, std::max(k, d + 1));
    }
    const int d = out.ground_multiplicity;
    auto gap_at = [&](double tau) {
        const auto v = linalg::lowest_eigenpairs(at(tau), d + 1, opts).values;
        return v[d] - v[0];
    };

    out.min_gap = std::numeric_limits<double>::infinity();
    int best = 0;
    for (int i = 0; i < n_samples; ++i) {
        const double tau = static_cast<double>(i) / (n_samples - 1);
        const auto v = linalg::lowest_eigenpairs(at(tau), k, opts).values;
        out.tau.push_back(tau);
        out.levels.push_back(v);
        out.gap.push_back(d < v.size() ? v[d] - v[0] : 0.0);
        if (out.gap.back() < out.min_gap) {
            out.min_gap = out.gap.back();
            best = i;
        }
    }
    out.min_gap_tau = out.tau[best];

    // Golden-section refinement inside the neighbouring cells.
    double lo = out.tau[std::max(best - 1, 0)];
    double hi = out.tau[std::min(best + 1, n_samples - 1)];
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = gap_at(x1), f2 = gap_at(x2);
    for (int it = 0; it < 40 && hi - lo > 1e-9; ++it) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = gap_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = gap_at(x1);
        }
    }
    const double x = f1 < f2 ? x1 : x2;
    const double fx = std::min(f1, f2);
    if (fx < out.min_gap) {
        out.min_gap = fx;
        out.min_gap_tau = x;
    }
    return out;
}

} // namespace aqtsp::evolution
