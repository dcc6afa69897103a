#include "aqtsp/tsp/hamiltonians.hpp"

#include "aqtsp/fock/ladder.hpp"
#include "aqtsp/tsp/q_combinatorial.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace aqtsp::tsp {

using fock::ModeId;
using fock::ModeKind;

namespace {

using Column = std::vector<std::pair<std::size_t, double>>;

// Applies a ladder step to (index, amplitude); returns false when the
// result leaves the truncated space.
bool step(const FockBasis& b, std::size_t& idx, double& amp, ModeId mode, int delta) {
    const int n = b.occupation(idx, mode);
    if (delta < 0 && n == 0) return false;
    const auto next = b.shifted(idx, mode, delta);
    if (!next) return false;
    amp *= delta > 0 ? std::sqrt(static_cast<double>(n + 1)) : std::sqrt(static_cast<double>(n));
    idx = *next;
    return true;
}

SparseOperator assemble(const FockBasis& basis, FilterTerm term, FilterFault fault) {
    std::vector<SparseOperator::Triplet> t;
    Column col_entries;
    for (std::size_t col = 0; col < basis.dimension(); ++col) {
        col_entries.clear();
        filter_column(basis, term, col, fault, col_entries);
        for (const auto& [row, v] : col_entries)
            t.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), v);
    }
    return SparseOperator::from_triplets(static_cast<Eigen::Index>(basis.dimension()), t);
}

void check_instance(const TspInstance& instance, const FockBasis& basis) {
    if (instance.n_cities() != basis.registry().n_cities()) {
        throw ValidationError("instance has " + std::to_string(instance.n_cities()) + " cities, basis registry has " +
                              std::to_string(basis.registry().n_cities()));
    }
    if (basis.registry().symmetric_links() && !instance.symmetric()) {
        throw ValidationError("symmetric-link registry needs a symmetric distance matrix");
    }
}

} // namespace

std::string to_string(PenaltyVariant v) {
    return v == PenaltyVariant::hermitian_square ? "hermitian_square" : "squared_plus_hc";
}

PenaltyVariant parse_penalty_variant(const std::string& name) {
    if (name == "hermitian_square") return PenaltyVariant::hermitian_square;
    if (name == "squared_plus_hc") return PenaltyVariant::squared_plus_hc;
    throw ValidationError("unknown penalty variant '" + name + "' (hermitian_square | squared_plus_hc)");
}

double scale_s(const TspInstance& instance, double inflation) {
    if (!(inflation >= 0.0) || !std::isfinite(inflation)) {
        throw ValidationError("scale inflation must be finite and >= 0");
    }
    return (1.0 + inflation) * 0.5 * instance.total_distance();
}

void filter_column(const FockBasis& basis, FilterTerm term, std::size_t col, FilterFault fault, Column& out) {
    const auto& reg = basis.registry();
    const int n = reg.n_cities();
    switch (term) {
    case FilterTerm::first_layer:
        for (City j = 2; j <= n; ++j) {
            const int links = basis.occupation(col, *reg.link(j, 1));
            if (links == 0) continue;
            std::size_t idx = col;
            double amp = links;
            if (!step(basis, idx, amp, reg.hooker(j), +1)) continue;
            if (!step(basis, idx, amp, reg.marker(j), +1)) continue;
            out.emplace_back(idx, amp);
        }
        break;
    case FilterTerm::link_layer:
        for (City i = 2; i <= n; ++i) {
            if (basis.occupation(col, reg.hooker(i)) == 0) continue;
            for (City j = 2; j <= n; ++j) {
                if (i == j) continue;
                const auto mode = fault == FilterFault::transposed_link ? reg.link(i, j) : reg.link(j, i);
                const int links = basis.occupation(col, *mode);
                if (links == 0) continue;
                std::size_t idx = col;
                double amp = links;
                if (!step(basis, idx, amp, reg.hooker(i), -1)) continue;
                if (!step(basis, idx, amp, reg.hooker(j), +1)) continue;
                if (!step(basis, idx, amp, reg.marker(j), +1)) continue;
                out.emplace_back(idx, amp);
            }
        }
        break;
    case FilterTerm::ending_layer:
        for (City j = 2; j <= n; ++j) {
            const int links = basis.occupation(col, *reg.link(1, j));
            if (links == 0) continue;
            std::size_t idx = col;
            double amp = links;
            if (!step(basis, idx, amp, reg.hooker(j), -1)) continue;
            out.emplace_back(idx, amp);
        }
        break;
    case FilterTerm::marker_product: {
        std::size_t idx = col;
        double amp = 1.0;
        for (City i = 2; i <= n; ++i)
            if (!step(basis, idx, amp, reg.marker(i), -1)) return;
        out.emplace_back(idx, amp);
        break;
    }
    }
}

FilterOperators build_filter_operators(const FockBasis& basis, FilterFault fault) {
    return {assemble(basis, FilterTerm::first_layer, fault), assemble(basis, FilterTerm::link_layer, fault),
            assemble(basis, FilterTerm::ending_layer, fault)};
}

SparseOperator build_marker_product(const FockBasis& basis) {
    return assemble(basis, FilterTerm::marker_product, FilterFault::none);
}

void require_filter_capacity(const FockBasis& basis) {
    const auto& c = basis.cutoff();
    const int n = basis.registry().n_cities();
    if (c.hooker_total_max && *c.hooker_total_max < 1) {
        throw ValidationError("Q needs hooker_total_max >= 1 (got " + std::to_string(*c.hooker_total_max) + ")");
    }
    if (c.marker_total_max && *c.marker_total_max < n - 1) {
        throw ValidationError("Q needs marker_total_max >= N-1 = " + std::to_string(n - 1) + " (got " +
                              std::to_string(*c.marker_total_max) + ")");
    }
}

SparseOperator build_Q(const FockBasis& basis, FilterFault fault) {
    require_filter_capacity(basis);
    const auto ops = build_filter_operators(basis, fault);
    SparseOperator q = ops.F;
    for (int k = 0; k < basis.registry().n_cities() - 2; ++k) q = ops.L * q;
    q = build_marker_product(basis) * (ops.E * q);
    if (basis.registry().symmetric_links()) q = 0.5 * q;
    return q;
}

SparseOperator build_initial_hamiltonian(const FockBasis& basis, const std::vector<cplx>& theta) {
    const auto& reg = basis.registry();
    if (theta.size() != reg.link_count()) {
        throw ValidationError("build_initial_hamiltonian: expected " + std::to_string(reg.link_count()) +
                              " displacements, got " + std::to_string(theta.size()));
    }
    for (const auto& t : theta)
        if (!std::isfinite(t.real()) || !std::isfinite(t.imag()))
            throw ValidationError("build_initial_hamiltonian: theta must be finite");

    std::vector<SparseOperator::Triplet> trip;
    for (std::size_t col = 0; col < basis.dimension(); ++col) {
        const auto c = static_cast<Eigen::Index>(col);
        double diag = 0.0;
        for (ModeId m = 0; m < reg.mode_count(); ++m) {
            const int n = basis.occupation(col, m);
            diag += n;
            if (m >= reg.link_count()) continue;
            const cplx th = theta[m];
            diag += std::norm(th);
            if (th == cplx{}) continue;
            if (auto up = basis.shifted(col, m, +1))
                trip.emplace_back(static_cast<Eigen::Index>(*up), c, -th * std::sqrt(static_cast<double>(n + 1)));
            if (n > 0)
                if (auto down = basis.shifted(col, m, -1))
                    trip.emplace_back(static_cast<Eigen::Index>(*down), c,
                                      -std::conj(th) * std::sqrt(static_cast<double>(n)));
        }
        trip.emplace_back(c, c, diag);
    }
    return SparseOperator::from_triplets(static_cast<Eigen::Index>(basis.dimension()), trip);
}

SparseOperator build_initial_hamiltonian(const FockBasis& basis, cplx theta) {
    return build_initial_hamiltonian(basis, std::vector<cplx>(basis.registry().link_count(), theta));
}

SparseOperator distance_operator(const TspInstance& instance, const FockBasis& basis) {
    check_instance(instance, basis);
    const auto& reg = basis.registry();
    RealVector d = RealVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        double sum = 0.0;
        for (ModeId m = 0; m < reg.link_count(); ++m) {
            const auto& p = reg.link_modes()[m];
            sum += instance.d(p.to, p.from) * basis.occupation(i, m);
        }
        d[static_cast<Eigen::Index>(i)] = sum;
    }
    return SparseOperator::diagonal(d);
}

SparseOperator penalty_operator(const SparseOperator& Q, PenaltyVariant variant) {
    const auto one = SparseOperator::identity(Q.dimension());
    const auto qm = Q - one;
    if (variant == PenaltyVariant::hermitian_square) return qm.adjoint() * qm;
    const auto sq = qm * qm;
    return sq + sq.adjoint();
}

SparseOperator build_target_hamiltonian(const TspInstance& instance, const FockBasis& basis, PenaltyVariant variant,
                                        double s, const SparseOperator& Q) {
    check_instance(instance, basis);
    if (!(s > 0.0)) throw ValidationError("build_target_hamiltonian: s must be positive");
    if (Q.dimension() != static_cast<Eigen::Index>(basis.dimension())) {
        throw ValidationError("build_target_hamiltonian: Q dimension does not match the basis");
    }
    const auto hm = fock::total_number(basis, ModeKind::hooker) + fock::total_number(basis, ModeKind::marker);
    return cplx(s) * hm + cplx(s) * penalty_operator(Q, variant) + distance_operator(instance, basis);
}

HamiltonianSet build_hamiltonian_set(const TspInstance& instance, const FockBasis& basis, cplx theta,
                                     PenaltyVariant variant, double inflation) {
    check_instance(instance, basis);
    require_filter_capacity(basis);
    HamiltonianSet set{basis, theta, scale_s(instance, inflation), variant, {}, {}, {}, {}, {}, {}};
    set.H_I = build_initial_hamiltonian(basis, theta);
    auto ops = build_filter_operators(basis);
    set.Q = ops.F;
    for (int k = 0; k < instance.n_cities() - 2; ++k) set.Q = ops.L * set.Q;
    set.Q = build_marker_product(basis) * (ops.E * set.Q);
    if (basis.registry().symmetric_links()) set.Q = 0.5 * set.Q;
    set.F = std::move(ops.F);
    set.L = std::move(ops.L);
    set.E = std::move(ops.E);
    set.H_P = build_target_hamiltonian(instance, basis, variant, set.s, set.Q);
    return set;
}

SectorHamiltonians vacuum_sector(const HamiltonianSet& set) {
    SectorHamiltonians out;
    out.indices = set.basis.hm_vacuum_indices();
    out.leakage = std::max(set.H_I.leakage(out.indices), set.H_P.leakage(out.indices));
    if (out.leakage > 1e-12) {
        std::ostringstream os;
        os << "vacuum_sector: hooker/marker vacuum sector is not invariant (leakage " << out.leakage << ")";
        throw InvariantError(os.str());
    }
    out.H_I = set.H_I.restrict_to(out.indices);
    out.H_P = set.H_P.restrict_to(out.indices);
    return out;
}

SparseOperator sector_target_hamiltonian(const TspInstance& instance, const FockBasis& link_basis,
                                         PenaltyVariant variant, double s) {
    check_instance(instance, link_basis);
    const auto& c = link_basis.cutoff();
    if (c.hooker_total_max.value_or(1) != 0 || c.marker_total_max.value_or(1) != 0) {
        throw ValidationError("sector_target_hamiltonian: basis must have hooker and marker totals 0");
    }
    const double factor = variant == PenaltyVariant::hermitian_square ? 1.0 : 2.0;
    const auto dist = distance_operator(instance, link_basis);
    RealVector diag(static_cast<Eigen::Index>(link_basis.dimension()));
    for (std::size_t i = 0; i < link_basis.dimension(); ++i) {
        const double q = q_vacuum_value(link_basis.registry(), link_basis.link_occupations(i));
        const auto k = static_cast<Eigen::Index>(i);
        diag[k] = factor * s * (q - 1.0) * (q - 1.0) + dist.coeff(k, k).real();
    }
    return SparseOperator::diagonal(diag);
}

} // namespace aqtsp::tsp
