#pragma once

#include "aqtsp/fock/modes.hpp"
#include "aqtsp/common.hpp"

#include <cstdint>
#include <string>

namespace aqtsp::tsp {

using fock::City;

/// Distance matrix for N cities. Entry (i, j) of the document matrix is
/// d_ij, the cost of the link emanating from city j and ending at city i,
/// matching the n_ij link convention. Symmetric instances make the
/// orientation irrelevant.
class TspInstance {
public:
    /// Validates and stores the matrix. With `require_symmetric`, d_ij must
    /// equal d_ji within 1e-12.
    TspInstance(Eigen::MatrixXd distances, bool require_symmetric = false);

    int n_cities() const { return static_cast<int>(d_.rows()); }
    const Eigen::MatrixXd& distances() const { return d_; }

    /// Cost of the link from `from` to `to` (1-based cities).
    double d(City to, City from) const { return d_(to - 1, from - 1); }

    bool symmetric(double tol = 1e-12) const;

    /// Sum of d_ij over all ordered pairs.
    double total_distance() const { return d_.sum(); }

private:
    Eigen::MatrixXd d_;
};

/// Parses `{"n_cities": N, "distances": [[...], ...]}`. Errors name the
/// offending entry with 1-based indices.
TspInstance parse_instance(const std::string& text, bool require_symmetric = false);
TspInstance load_instance(const std::string& path, bool require_symmetric = false);
std::string instance_to_json(const TspInstance& instance);

/// Random points in the unit square with Euclidean distances.
TspInstance random_euclidean(int n_cities, std::uint64_t seed);

/// Independent uniform distances in [low, high) for every ordered pair.
TspInstance random_asymmetric(int n_cities, std::uint64_t seed, double low = 0.5, double high = 2.0);

} // namespace aqtsp::tsp
