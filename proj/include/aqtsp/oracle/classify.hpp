#pragma once

#include "aqtsp/fock/basis.hpp"

#include <string>
#include <vector>

namespace aqtsp::oracle {

/// Taxonomy of link configurations (hooker and marker sectors empty).
enum class ConfigClass {
    connected_complete_tour,  // a Hamiltonian cycle through all cities, each link once, nothing else
    no_start_link,            // nothing leaves city 1
    short_tour,               // some city unvisited and fewer than N links reachable from city 1
    incomplete,               // a simple cycle through city 1 that misses cities
    revisit_incomplete,       // a city missed while another is visited more than once
    disjoint_subtours,        // every city visited but not all connected to city 1
    broken,                   // some city has unequal in and out traversals
    multi_traversal_tour,     // a Hamiltonian cycle with some link traversed more than once
    other,
};

std::string to_string(ConfigClass c);

/// The six classes whose configurations Q must eliminate.
const std::vector<ConfigClass>& elimination_classes();

/// Graph analysis of the multiset of directed links. In symmetric
/// registries each undirected link counts once in each direction.
ConfigClass classify_configuration(const fock::ModeRegistry& registry, const std::vector<int>& links);

/// Same, for a full basis state; throws ValidationError when the hooker or
/// marker sector is not empty.
ConfigClass classify_state(const fock::ModeRegistry& registry, const fock::BasisState& state);

/// All link configurations with per-link occupation <= per_mode_max and
/// total <= max_link_total that fall in class `c`.
std::vector<std::vector<int>> configurations_of_class(const fock::ModeRegistry& registry, ConfigClass c,
                                                      int per_mode_max, int max_link_total);

} // namespace aqtsp::oracle
