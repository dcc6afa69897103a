#pragma once

#include "aqtsp/fock/basis.hpp"
#include "aqtsp/tsp/hamiltonians.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace aqtsp::tsp {

using fock::BasisState;
using fock::ModeRegistry;
using fock::OccupationCutoff;

/// Q applied to |links> (x) |0>_h (x) |0>_m by expanding the operator
/// string over city sequences 1 -> j_1 -> ... -> j_{N-1} -> 1 with j_k != 1.
/// Each sequence contributes the product of link occupations along the
/// path times the hooker and marker ladder factors. With a cutoff, any
/// intermediate state outside the caps drops the sequence, mirroring the
/// truncated matrix product. Equal output states are merged; terms that
/// cancel exactly are removed.
std::vector<std::pair<BasisState, double>> q_combinatorial_apply(const ModeRegistry& registry,
                                                                 const std::vector<int>& links,
                                                                 const std::optional<OccupationCutoff>& cutoff = {},
                                                                 FilterFault fault = FilterFault::none);

/// Same expansion for a full basis state; throws ValidationError when the
/// hooker or marker sector is not empty.
std::vector<std::pair<BasisState, double>> q_combinatorial_apply_state(const ModeRegistry& registry,
                                                                       const BasisState& state,
                                                                       const std::optional<OccupationCutoff>& cutoff = {},
                                                                       FilterFault fault = FilterFault::none);

/// Diagonal value of Q on a vacuum-h/m link configuration: the sum over
/// directed Hamiltonian cycles from city 1 of the product of occupations
/// along the cycle (halved in symmetric registries).
double q_vacuum_value(const ModeRegistry& registry, const std::vector<int>& links);

} // namespace aqtsp::tsp
