#pragma once

#include <algorithm>
#include <cmath>

namespace aqtsp::evolution {

namespace detail {

struct GK15 {
    static constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                     0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <class Fn>
double gk_recurse(Fn& fn, double a, double b, double tol, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = fn(c);
    double kron = GK15::wk[7] * fc;
    double gauss = GK15::wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * GK15::xk[i];
        const double s = fn(c - dx) + fn(c + dx);
        kron += GK15::wk[i] * s;
        if (i % 2 == 1) gauss += GK15::wg[i / 2] * s;
    }
    kron *= h;
    gauss *= h;
    if (depth <= 0 || std::abs(kron - gauss) <= std::max(tol, 1e-15 * std::abs(kron))) return kron;
    return gk_recurse(fn, a, c, 0.5 * tol, depth - 1) + gk_recurse(fn, c, b, 0.5 * tol, depth - 1);
}

} // namespace detail

template <class Fn>
double integrate(Fn&& fn, double a, double b, double tol, int depth) {
    if (b == a) return 0.0;
    return detail::gk_recurse(fn, a, b, tol, depth);
}

template <class Fn>
double integrate_schedule(const Schedule& schedule, Fn&& fn, double tol) {
    const auto cuts = schedule.breakpoints();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += integrate(fn, cuts[i], cuts[i + 1], tol);
    return sum;
}

} // namespace aqtsp::evolution
