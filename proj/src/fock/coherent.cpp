#include "aqtsp/fock/coherent.hpp"

#include <cmath>
#include <sstream>

namespace aqtsp::fock {

double coherent_retained_probability(cplx theta, int cap) {
    const double x = std::norm(theta);
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n <= cap; ++n) {
        term *= x / n;
        sum += term;
    }
    return std::exp(-x) * sum;
}

CoherentState coherent_state(const FockBasis& basis, const std::vector<cplx>& theta, double warn_above) {
    const auto& reg = basis.registry();
    if (theta.size() != reg.link_count()) {
        throw ValidationError("coherent_state: expected " + std::to_string(reg.link_count()) +
                              " displacements, got " + std::to_string(theta.size()));
    }
    for (const auto& t : theta) {
        if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
            throw ValidationError("coherent_state: displacement must be finite");
        }
    }
    const int cap = basis.cutoff().per_mode_max;

    // powers[m][n] = e^{-|theta_m|^2/2} theta_m^n / sqrt(n!)
    std::vector<std::vector<cplx>> powers(theta.size(), std::vector<cplx>(static_cast<std::size_t>(cap) + 1));
    for (std::size_t m = 0; m < theta.size(); ++m) {
        powers[m][0] = std::exp(-0.5 * std::norm(theta[m]));
        for (int n = 1; n <= cap; ++n) powers[m][n] = powers[m][n - 1] * theta[m] / std::sqrt(static_cast<double>(n));
    }

    Vector amps = Vector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        if (!basis.hm_vacuum(i)) continue;
        cplx a = 1.0;
        for (std::size_t m = 0; m < theta.size(); ++m) a *= powers[m][basis.occupation(i, m)];
        amps[static_cast<Eigen::Index>(i)] = a;
    }
    const double retained = amps.squaredNorm();
    CoherentState out;
    out.truncation_weight = std::max(0.0, 1.0 - retained);
    out.state = StateVector(amps / std::sqrt(retained));
    if (out.truncation_weight > warn_above) {
        std::ostringstream os;
        os << "coherent state truncation weight " << out.truncation_weight << " exceeds " << warn_above
           << " (" << basis.cutoff().describe() << ")";
        out.warning = os.str();
    }
    return out;
}

CoherentState coherent_state(const FockBasis& basis, cplx theta, double warn_above) {
    return coherent_state(basis, std::vector<cplx>(basis.registry().link_count(), theta), warn_above);
}

} // namespace aqtsp::fock
