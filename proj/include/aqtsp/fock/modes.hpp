#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace aqtsp::fock {

/// City labels are 1-based; city 1 is the tour origin.
using City = int;
using ModeId = std::size_t;

enum class ModeKind { link, hooker, marker };

/// A link mode l_{to,from} counts traversals of the link emanating from
/// `from` and ending at `to`. In symmetric registries `to < from` and the
/// mode stands for both orientations.
struct LinkPair {
    City to;
    City from;
    friend bool operator==(const LinkPair&, const LinkPair&) = default;
};

/// Mode bookkeeping for the three bosonic families. Modes are laid out as
/// links, then hookers, then markers; this order is the significance order
/// of the basis enumeration.
class ModeRegistry {
public:
    /// Self-links are never registered and city 1 carries no hooker or marker.
    ModeRegistry(int n_cities, bool symmetric_links);

    int n_cities() const { return n_cities_; }
    bool symmetric_links() const { return symmetric_; }

    std::size_t mode_count() const { return links_.size() + hookers_.size() + markers_.size(); }
    std::size_t link_count() const { return links_.size(); }

    const std::vector<LinkPair>& link_modes() const { return links_; }
    const std::vector<City>& hooker_modes() const { return hookers_; }
    const std::vector<City>& marker_modes() const { return markers_; }

    ModeKind kind(ModeId mode) const;

    /// Mode of n_{to,from}; in symmetric mode the orientation is ignored.
    /// Returns nullopt for self-links.
    std::optional<ModeId> link(City to, City from) const;
    ModeId hooker(City city) const;
    ModeId marker(City city) const;

    ModeId first_hooker() const { return links_.size(); }
    ModeId first_marker() const { return links_.size() + hookers_.size(); }

    std::string label(ModeId mode) const;

private:
    int n_cities_;
    bool symmetric_;
    std::vector<LinkPair> links_;
    std::vector<City> hookers_;
    std::vector<City> markers_;
    std::vector<std::ptrdiff_t> link_lookup_;  // n*n table, -1 where absent
};

/// Occupation truncation. A creation operator whose result would exceed
/// any cap maps to the zero vector.
struct OccupationCutoff {
    int per_mode_max = 2;
    std::optional<int> link_total_max;
    std::optional<int> hooker_total_max;
    std::optional<int> marker_total_max;

    /// Throws ValidationError on per_mode_max < 1 or negative totals.
    void validate() const;
    std::string describe() const;
};

} // namespace aqtsp::fock
