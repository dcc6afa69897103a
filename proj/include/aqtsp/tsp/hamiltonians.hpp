#pragma once

#include "aqtsp/fock/basis.hpp"
#include "aqtsp/fock/sparse_operator.hpp"
#include "aqtsp/tsp/instance.hpp"

#include <string>
#include <utility>
#include <vector>

namespace aqtsp::tsp {

using fock::FockBasis;
using fock::SparseOperator;

/// Penalty form used in H_P.
///   hermitian_square: (Q^dagger - 1)(Q - 1)
///   squared_plus_hc:  (Q - 1)^2 + h.c.
enum class PenaltyVariant { hermitian_square, squared_plus_hc };

std::string to_string(PenaltyVariant v);
PenaltyVariant parse_penalty_variant(const std::string& name);

/// Relative inflation of s above half the total distance.
inline constexpr double default_scale_inflation = 0.1;

/// s = (1 + inflation) * (1/2) * sum over ordered pairs of d_ij.
double scale_s(const TspInstance& instance, double inflation = default_scale_inflation);

/// Deliberate corruption of the link layer used to show that the filter
/// checks can fail. `transposed_link` makes L read n_ij where it should
/// read n_ji, i.e. it follows links against their direction.
enum class FilterFault { none, transposed_link };

enum class FilterTerm { first_layer, link_layer, ending_layer, marker_product };

/// Nonzero entries (row, value) of column `col` of one filter factor on
/// the truncated basis. Shared by the sparse builders and the per-block
/// diagnostics so that both see the same truncation.
void filter_column(const FockBasis& basis, FilterTerm term, std::size_t col, FilterFault fault,
                   std::vector<std::pair<std::size_t, double>>& out);

struct FilterOperators {
    SparseOperator F;  // sum_{j!=1} m_j^+ h_j^+ n_{j1}
    SparseOperator L;  // sum_{i,j!=1, i!=j} m_j^+ h_j^+ n_{ji} h_i
    SparseOperator E;  // sum_{j!=1} n_{1j} h_j
};

FilterOperators build_filter_operators(const FockBasis& basis, FilterFault fault = FilterFault::none);

/// Product of the marker annihilators m_2 ... m_N.
SparseOperator build_marker_product(const FockBasis& basis);

/// Q = (prod m_i) E L^{N-2} F. In symmetric-link registries every
/// undirected cycle is traced in both orientations, so the product is
/// halved to keep Q|tour> = |tour>.
/// Throws ValidationError when the hooker or marker caps cannot hold the
/// intermediate states (hooker total < 1 or marker total < N - 1).
SparseOperator build_Q(const FockBasis& basis, FilterFault fault = FilterFault::none);

/// Throws ValidationError unless the basis can represent every
/// intermediate state of the filter product.
void require_filter_capacity(const FockBasis& basis);

/// H_I = sum_links (l^+ - theta^*)(l - theta) + sum h^+ h + sum m^+ m.
SparseOperator build_initial_hamiltonian(const FockBasis& basis, const std::vector<cplx>& theta);
SparseOperator build_initial_hamiltonian(const FockBasis& basis, cplx theta);

/// sum d_ij n_ij (diagonal).
SparseOperator distance_operator(const TspInstance& instance, const FockBasis& basis);

SparseOperator penalty_operator(const SparseOperator& Q, PenaltyVariant variant);

/// H_P = s (sum h^+ h + sum m^+ m) + s * penalty + sum d_ij n_ij.
SparseOperator build_target_hamiltonian(const TspInstance& instance, const FockBasis& basis, PenaltyVariant variant,
                                        double s, const SparseOperator& Q);

struct HamiltonianSet {
    FockBasis basis;
    cplx theta;
    double s = 0.0;
    PenaltyVariant variant = PenaltyVariant::hermitian_square;
    SparseOperator H_I, F, L, E, Q, H_P;
};

HamiltonianSet build_hamiltonian_set(const TspInstance& instance, const FockBasis& basis, cplx theta,
                                     PenaltyVariant variant = PenaltyVariant::hermitian_square,
                                     double inflation = default_scale_inflation);

/// H_I and H_P restricted to the states with empty hooker and marker
/// sectors. Both operators leave that sector invariant; the leakage is
/// measured and must vanish.
struct SectorHamiltonians {
    std::vector<Eigen::Index> indices;  // into the parent basis
    SparseOperator H_I, H_P;
    double leakage = 0.0;
};

SectorHamiltonians vacuum_sector(const HamiltonianSet& set);

/// Link-only construction of the same sector operators: `link_basis` must
/// have zero hooker and marker totals. H_P is diagonal there with the
/// penalty replaced by its exact value (q - 1)^2 (doubled for
/// squared_plus_hc), q being the cycle sum returned by q_vacuum_value.
SparseOperator sector_target_hamiltonian(const TspInstance& instance, const FockBasis& link_basis,
                                         PenaltyVariant variant, double s);

} // namespace aqtsp::tsp
