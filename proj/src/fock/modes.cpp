#include "aqtsp/fock/modes.hpp"

#include "aqtsp/common.hpp"

#include <sstream>

namespace aqtsp::fock {

ModeRegistry::ModeRegistry(int n_cities, bool symmetric_links)
    : n_cities_(n_cities), symmetric_(symmetric_links) {
    if (n_cities < 3) {
        throw ValidationError("ModeRegistry: n_cities must be >= 3, got " + std::to_string(n_cities));
    }
    const auto n = static_cast<std::size_t>(n_cities);
    link_lookup_.assign(n * n, -1);
    for (City to = 1; to <= n_cities; ++to) {
        for (City from = 1; from <= n_cities; ++from) {
            if (to == from) continue;
            if (symmetric_ && to > from) continue;
            link_lookup_[(to - 1) * n + (from - 1)] = static_cast<std::ptrdiff_t>(links_.size());
            links_.push_back({to, from});
        }
    }
    if (symmetric_) {
        for (City to = 1; to <= n_cities; ++to)
            for (City from = 1; from < to; ++from)
                link_lookup_[(to - 1) * n + (from - 1)] = link_lookup_[(from - 1) * n + (to - 1)];
    }
    for (City c = 2; c <= n_cities; ++c) {
        hookers_.push_back(c);
        markers_.push_back(c);
    }
}

ModeKind ModeRegistry::kind(ModeId mode) const {
    if (mode < first_hooker()) return ModeKind::link;
    if (mode < first_marker()) return ModeKind::hooker;
    if (mode < mode_count()) return ModeKind::marker;
    throw ValidationError("ModeRegistry: unregistered mode " + std::to_string(mode));
}

std::optional<ModeId> ModeRegistry::link(City to, City from) const {
    if (to < 1 || to > n_cities_ || from < 1 || from > n_cities_) {
        throw ValidationError("ModeRegistry: city out of range in link(" + std::to_string(to) + ", " +
                              std::to_string(from) + ")");
    }
    const auto n = static_cast<std::size_t>(n_cities_);
    const auto id = link_lookup_[(to - 1) * n + (from - 1)];
    if (id < 0) return std::nullopt;
    return static_cast<ModeId>(id);
}

ModeId ModeRegistry::hooker(City city) const {
    if (city < 2 || city > n_cities_) {
        throw ValidationError("ModeRegistry: no hooker mode for city " + std::to_string(city));
    }
    return first_hooker() + static_cast<ModeId>(city - 2);
}

ModeId ModeRegistry::marker(City city) const {
    if (city < 2 || city > n_cities_) {
        throw ValidationError("ModeRegistry: no marker mode for city " + std::to_string(city));
    }
    return first_marker() + static_cast<ModeId>(city - 2);
}

std::string ModeRegistry::label(ModeId mode) const {
    std::ostringstream os;
    switch (kind(mode)) {
    case ModeKind::link: {
        const auto& p = links_[mode];
        os << "l_" << p.to << "," << p.from;
        break;
    }
    case ModeKind::hooker: os << "h_" << hookers_[mode - first_hooker()]; break;
    case ModeKind::marker: os << "m_" << markers_[mode - first_marker()]; break;
    }
    return os.str();
}

void OccupationCutoff::validate() const {
    if (per_mode_max < 1) {
        throw ValidationError("OccupationCutoff: per_mode_max must be >= 1, got " + std::to_string(per_mode_max));
    }
    auto check = [](const std::optional<int>& cap, const char* name) {
        if (cap && *cap < 0) {
            throw ValidationError(std::string("OccupationCutoff: ") + name + " must be >= 0, got " +
                                  std::to_string(*cap));
        }
    };
    check(link_total_max, "link_total_max");
    check(hooker_total_max, "hooker_total_max");
    check(marker_total_max, "marker_total_max");
}

std::string OccupationCutoff::describe() const {
    std::ostringstream os;
    os << "per_mode_max=" << per_mode_max;
    auto put = [&os](const char* name, const std::optional<int>& cap) {
        os << ", " << name << "=";
        if (cap) os << *cap; else os << "none";
    };
    put("link_total_max", link_total_max);
    put("hooker_total_max", hooker_total_max);
    put("marker_total_max", marker_total_max);
    return os.str();
}

} // namespace aqtsp::fock
