#pragma once

#include "aqtsp/fock/basis.hpp"
#include "aqtsp/tsp/instance.hpp"

#include <vector>

namespace aqtsp::oracle {

using fock::City;

/// A closed tour given as the visiting order, starting at city 1.
struct Tour {
    std::vector<City> sequence;
    double length = 0.0;
};

/// Throws ValidationError unless `sequence` is a permutation of 1..N that
/// starts at 1.
void validate_tour(const std::vector<City>& sequence, int n_cities);

/// Sum of d(next, current) along the cycle, closing edge included.
double tour_length(const tsp::TspInstance& instance, const std::vector<City>& sequence);

/// Largest N the factorial scan accepts.
inline constexpr int brute_force_max_cities = 10;

struct OracleResult {
    double length = 0.0;
    std::vector<Tour> tours;  // every optimal tour, in lexicographic order of sequence
};

/// Exact scan over all (N-1)! orders starting at city 1. Ties within
/// `tie_tol` (relative to the optimum, floor 1) are kept. In directed mode
/// both orientations of a symmetric optimum are reported; with
/// `one_orientation` only the orientation whose second city is smaller
/// than its last is kept.
OracleResult brute_force_shortest(const tsp::TspInstance& instance, bool one_orientation = false,
                                  double tie_tol = 1e-9);

/// On-tour link modes set to 1, everything else 0.
fock::BasisState tour_to_basis_state(const std::vector<City>& sequence, const fock::ModeRegistry& registry);

/// Link occupations only (first link_count() entries of the basis state).
std::vector<int> tour_links(const std::vector<City>& sequence, const fock::ModeRegistry& registry);

} // namespace aqtsp::oracle
