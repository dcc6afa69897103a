#include "aqtsp/fock/basis.hpp"

#include "aqtsp/common.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace aqtsp::fock {

namespace {

constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > saturated / b) return saturated;
    return a * b;
}

std::uint64_t add_sat(std::uint64_t a, std::uint64_t b) {
    return (a > saturated - b) ? saturated : a + b;
}

// Number of length-k vectors with entries in [0, cap] whose sum is <= total.
std::uint64_t sector_count(std::size_t k, int cap, std::optional<int> total) {
    if (!total) {
        std::uint64_t c = 1;
        for (std::size_t i = 0; i < k; ++i) c = mul_sat(c, static_cast<std::uint64_t>(cap) + 1);
        return c;
    }
    const int t = *total;
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(t) + 1, 0);
    ways[0] = 1;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::uint64_t> next(ways.size(), 0);
        for (int s = 0; s <= t; ++s) {
            if (ways[s] == 0) continue;
            for (int n = 0; n <= cap && s + n <= t; ++n) next[s + n] = add_sat(next[s + n], ways[s]);
        }
        ways = std::move(next);
    }
    std::uint64_t sum = 0;
    for (auto w : ways) sum = add_sat(sum, w);
    return sum;
}

struct SectorPlan {
    std::size_t begin;
    std::size_t end;
    int total;  // remaining budget; INT_MAX when uncapped
};

} // namespace

std::uint64_t FockBasis::count_states(const ModeRegistry& registry, const OccupationCutoff& cutoff) {
    cutoff.validate();
    const int cap = cutoff.per_mode_max;
    std::uint64_t c = sector_count(registry.link_count(), cap, cutoff.link_total_max);
    c = mul_sat(c, sector_count(registry.hooker_modes().size(), cap, cutoff.hooker_total_max));
    c = mul_sat(c, sector_count(registry.marker_modes().size(), cap, cutoff.marker_total_max));
    return c;
}

FockBasis::FockBasis(ModeRegistry registry, OccupationCutoff cutoff, std::size_t max_dimension)
    : registry_(std::move(registry)), cutoff_(cutoff) {
    cutoff_.validate();
    const std::size_t modes = registry_.mode_count();
    radix_ = static_cast<std::uint64_t>(cutoff_.per_mode_max) + 1;

    // Keys must fit: radix^modes < 2^64.
    strides_.assign(modes, 1);
    std::uint64_t span = 1;
    for (std::size_t m = modes; m-- > 0;) {
        strides_[m] = span;
        if (span > saturated / radix_) {
            std::ostringstream os;
            os << "FockBasis: " << modes << " modes with per_mode_max=" << cutoff_.per_mode_max
               << " exceed the 64-bit state key; reduce per_mode_max or use symmetric links";
            throw CapacityError(os.str());
        }
        span *= radix_;
    }
    hm_modulus_ = registry_.link_count() < modes ? strides_[registry_.link_count() - 1] : 1;

    const std::uint64_t expected = count_states(registry_, cutoff_);
    if (expected > max_dimension) {
        std::ostringstream os;
        os << "FockBasis: " << expected << " states exceed the budget of " << max_dimension << " ("
           << cutoff_.describe() << ", " << registry_.link_count() << " link modes, "
           << registry_.hooker_modes().size() << " hooker modes, " << registry_.marker_modes().size()
           << " marker modes); lower per_mode_max or set sector totals";
        throw CapacityError(os.str());
    }
    keys_.reserve(static_cast<std::size_t>(expected));

    constexpr int uncapped = std::numeric_limits<int>::max();
    const std::size_t first_h = registry_.first_hooker();
    const std::size_t first_m = registry_.first_marker();
    std::vector<SectorPlan> sectors = {
        {0, first_h, cutoff_.link_total_max.value_or(uncapped)},
        {first_h, first_m, cutoff_.hooker_total_max.value_or(uncapped)},
        {first_m, modes, cutoff_.marker_total_max.value_or(uncapped)},
    };

    // Depth-first odometer; visiting occupations in increasing order at every
    // depth yields keys in increasing (lexicographic) order.
    std::vector<int> budget(sectors.size());
    for (std::size_t s = 0; s < sectors.size(); ++s) budget[s] = sectors[s].total;
    auto sector_of = [&](std::size_t mode) {
        return mode < first_h ? 0u : (mode < first_m ? 1u : 2u);
    };

    auto recurse = [&](auto&& self, std::size_t mode, std::uint64_t key) -> void {
        if (mode == modes) {
            keys_.push_back(key);
            return;
        }
        const auto s = sector_of(mode);
        const int limit = std::min(cutoff_.per_mode_max, budget[s]);
        for (int n = 0; n <= limit; ++n) {
            budget[s] -= n;
            self(self, mode + 1, key + static_cast<std::uint64_t>(n) * strides_[mode]);
            budget[s] += n;
        }
    };
    recurse(recurse, 0, 0);

    if (keys_.size() != expected) {
        throw InvariantError("FockBasis: enumerated " + std::to_string(keys_.size()) + " states, expected " +
                             std::to_string(expected));
    }
}

BasisState FockBasis::state(std::size_t index) const {
    BasisState s(registry_.mode_count());
    std::uint64_t key = keys_.at(index);
    for (std::size_t m = 0; m < s.size(); ++m) {
        s[m] = static_cast<int>(key / strides_[m]);
        key %= strides_[m];
    }
    return s;
}

int FockBasis::occupation(std::size_t index, ModeId mode) const {
    return static_cast<int>((keys_[index] / strides_[mode]) % radix_);
}

std::optional<std::size_t> FockBasis::find_key(std::uint64_t key) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - keys_.begin());
}

std::optional<std::size_t> FockBasis::index_of(std::span<const int> state) const {
    if (state.size() != registry_.mode_count()) {
        throw ValidationError("FockBasis::index_of: state has " + std::to_string(state.size()) +
                              " entries, registry has " + std::to_string(registry_.mode_count()) + " modes");
    }
    std::uint64_t key = 0;
    for (std::size_t m = 0; m < state.size(); ++m) {
        if (state[m] < 0 || state[m] > cutoff_.per_mode_max) return std::nullopt;
        key += static_cast<std::uint64_t>(state[m]) * strides_[m];
    }
    return find_key(key);
}

std::optional<std::size_t> FockBasis::shifted(std::size_t index, ModeId mode, int delta) const {
    const int n = occupation(index, mode) + delta;
    if (n < 0 || n > cutoff_.per_mode_max) return std::nullopt;
    const std::uint64_t key = keys_[index];
    const std::uint64_t moved = delta >= 0 ? key + static_cast<std::uint64_t>(delta) * strides_[mode]
                                           : key - static_cast<std::uint64_t>(-delta) * strides_[mode];
    return find_key(moved);
}

bool FockBasis::hm_vacuum(std::size_t index) const {
    return keys_[index] % hm_modulus_ == 0;
}

std::vector<int> FockBasis::link_occupations(std::size_t index) const {
    auto s = state(index);
    s.resize(registry_.link_count());
    return s;
}

std::vector<Eigen::Index> FockBasis::hm_vacuum_indices() const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < keys_.size(); ++i)
        if (keys_[i] % hm_modulus_ == 0) out.push_back(static_cast<Eigen::Index>(i));
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> FockBasis::link_blocks() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= keys_.size(); ++i) {
        if (i == keys_.size() || keys_[i] / hm_modulus_ != keys_[begin] / hm_modulus_) {
            out.emplace_back(begin, i);
            begin = i;
        }
    }
    return out;
}

} // namespace aqtsp::fock
