#include "aqtsp/oracle/tour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace aqtsp::oracle {

void validate_tour(const std::vector<City>& sequence, int n_cities) {
    if (static_cast<int>(sequence.size()) != n_cities) {
        throw ValidationError("tour has " + std::to_string(sequence.size()) + " cities, expected " +
                              std::to_string(n_cities));
    }
    if (sequence.front() != 1) throw ValidationError("tour must start at city 1");
    std::vector<bool> seen(static_cast<std::size_t>(n_cities) + 1, false);
    for (City c : sequence) {
        if (c < 1 || c > n_cities) throw ValidationError("tour city " + std::to_string(c) + " out of range");
        if (seen[c]) throw ValidationError("tour visits city " + std::to_string(c) + " twice");
        seen[c] = true;
    }
}

double tour_length(const tsp::TspInstance& instance, const std::vector<City>& sequence) {
    validate_tour(sequence, instance.n_cities());
    double len = 0.0;
    for (std::size_t k = 0; k < sequence.size(); ++k) {
        const City from = sequence[k];
        const City to = sequence[(k + 1) % sequence.size()];
        len += instance.d(to, from);
    }
    return len;
}

OracleResult brute_force_shortest(const tsp::TspInstance& instance, bool one_orientation, double tie_tol) {
    const int n = instance.n_cities();
    if (n > brute_force_max_cities) {
        throw ValidationError("brute_force_shortest: " + std::to_string(n) + " cities means " +
                              "(N-1)! orders; the exact scan is limited to N <= " +
                              std::to_string(brute_force_max_cities) + ", use a smaller instance");
    }
    std::vector<City> seq(static_cast<std::size_t>(n));
    std::iota(seq.begin(), seq.end(), 1);
    std::vector<Tour> all;
    double best = std::numeric_limits<double>::infinity();
    do {
        if (one_orientation && seq[1] > seq.back()) continue;
        const double len = tour_length(instance, seq);
        best = std::min(best, len);
        all.push_back({seq, len});
    } while (std::next_permutation(seq.begin() + 1, seq.end()));

    OracleResult out;
    out.length = best;
    const double tol = tie_tol * std::max(1.0, std::abs(best));
    for (auto& t : all)
        if (t.length <= best + tol) out.tours.push_back(std::move(t));
    return out;
}

std::vector<int> tour_links(const std::vector<City>& sequence, const fock::ModeRegistry& registry) {
    validate_tour(sequence, registry.n_cities());
    std::vector<int> links(registry.link_count(), 0);
    for (std::size_t k = 0; k < sequence.size(); ++k) {
        const City from = sequence[k];
        const City to = sequence[(k + 1) % sequence.size()];
        links[*registry.link(to, from)] = 1;
    }
    return links;
}

fock::BasisState tour_to_basis_state(const std::vector<City>& sequence, const fock::ModeRegistry& registry) {
    auto links = tour_links(sequence, registry);
    links.resize(registry.mode_count(), 0);
    return links;
}

} // namespace aqtsp::oracle
