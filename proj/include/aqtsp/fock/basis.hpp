#pragma once

#include "aqtsp/fock/modes.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace aqtsp::fock {

/// Occupation numbers, one per registered mode, in registry order.
using BasisState = std::vector<int>;

/// Default ceiling on enumerated states.
inline constexpr std::size_t default_max_dimension = 6'000'000;

/// Enumerated truncated occupation-number basis.
///
/// States are ordered lexicographically over the occupation vectors (mode 0
/// most significant). Each state is stored as a mixed-radix key with radix
/// per_mode_max + 1, so the key order coincides with the lexicographic order
/// and lookups are binary searches.
class FockBasis {
public:
    FockBasis(ModeRegistry registry, OccupationCutoff cutoff,
              std::size_t max_dimension = default_max_dimension);

    const ModeRegistry& registry() const { return registry_; }
    const OccupationCutoff& cutoff() const { return cutoff_; }

    std::size_t dimension() const { return keys_.size(); }

    BasisState state(std::size_t index) const;
    int occupation(std::size_t index, ModeId mode) const;

    /// Index of `state`, or nullopt if it lies outside the truncated space.
    std::optional<std::size_t> index_of(std::span<const int> state) const;

    /// Index of the state obtained from `index` by adding `delta` quanta to
    /// `mode`; nullopt when the result leaves the truncated space.
    std::optional<std::size_t> shifted(std::size_t index, ModeId mode, int delta) const;

    /// True when every hooker and marker occupation is zero.
    bool hm_vacuum(std::size_t index) const;

    /// Link occupations of a state (first link_count() entries).
    std::vector<int> link_occupations(std::size_t index) const;

    /// Indices of all states with empty hooker and marker sectors, ascending.
    std::vector<Eigen::Index> hm_vacuum_indices() const;

    /// States sharing one link configuration are contiguous; returns the
    /// [begin, end) ranges in basis order.
    std::vector<std::pair<std::size_t, std::size_t>> link_blocks() const;

    /// Closed-form state count for a registry/cutoff pair, saturating at
    /// UINT64_MAX.
    static std::uint64_t count_states(const ModeRegistry& registry, const OccupationCutoff& cutoff);

private:
    std::optional<std::size_t> find_key(std::uint64_t key) const;

    ModeRegistry registry_;
    OccupationCutoff cutoff_;
    std::uint64_t radix_;
    std::vector<std::uint64_t> strides_;
    std::vector<std::uint64_t> keys_;
    std::uint64_t hm_modulus_;  // radix^(hooker+marker modes); h/m vacuum <=> key % hm_modulus_ == 0
};

} // namespace aqtsp::fock
