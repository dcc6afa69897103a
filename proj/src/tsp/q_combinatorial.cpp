#include "aqtsp/tsp/q_combinatorial.hpp"

#include <cmath>
#include <map>

namespace aqtsp::tsp {

namespace {

struct Walk {
    const ModeRegistry& reg;
    const std::vector<int>& links;
    const std::optional<OccupationCutoff>& cutoff;
    FilterFault fault;
    std::vector<int> markers;  // index city - 2
    int marker_total = 0;
    std::map<BasisState, double> out;

    int n(City to, City from) const { return links[*reg.link(to, from)]; }

    bool can_mark(City c) const {
        if (!cutoff) return true;
        if (markers[c - 2] + 1 > cutoff->per_mode_max) return false;
        return !cutoff->marker_total_max || marker_total + 1 <= *cutoff->marker_total_max;
    }

    double mark(City c) {
        ++marker_total;
        return std::sqrt(static_cast<double>(++markers[c - 2]));
    }

    void unmark(City c) {
        --marker_total;
        --markers[c - 2];
    }

    void finish(City hook, double amp) {
        const int closing = n(1, hook);
        if (closing == 0) return;
        amp *= closing;
        BasisState s(reg.mode_count(), 0);
        for (std::size_t m = 0; m < links.size(); ++m) s[m] = links[m];
        for (City c = 2; c <= reg.n_cities(); ++c) {
            const int k = markers[c - 2];
            if (k == 0) return;
            amp *= std::sqrt(static_cast<double>(k));
            s[reg.marker(c)] = k - 1;
        }
        out[s] += amp;
    }

    void layer(City hook, int remaining, double amp) {
        if (remaining == 0) {
            finish(hook, amp);
            return;
        }
        for (City j = 2; j <= reg.n_cities(); ++j) {
            if (j == hook) continue;
            const int k = fault == FilterFault::transposed_link ? n(hook, j) : n(j, hook);
            if (k == 0 || !can_mark(j)) continue;
            const double f = mark(j);
            layer(j, remaining - 1, amp * k * f);
            unmark(j);
        }
    }
};

} // namespace

std::vector<std::pair<BasisState, double>> q_combinatorial_apply(const ModeRegistry& registry,
                                                                 const std::vector<int>& links,
                                                                 const std::optional<OccupationCutoff>& cutoff,
                                                                 FilterFault fault) {
    if (links.size() != registry.link_count()) {
        throw ValidationError("q_combinatorial_apply: expected " + std::to_string(registry.link_count()) +
                              " link occupations, got " + std::to_string(links.size()));
    }
    for (int k : links)
        if (k < 0) throw ValidationError("q_combinatorial_apply: negative link occupation");
    Walk w{registry, links, cutoff, fault, std::vector<int>(static_cast<std::size_t>(registry.n_cities() - 1), 0), 0,
           {}};
    const bool hooks_allowed = !cutoff || cutoff->hooker_total_max.value_or(1) >= 1;
    if (hooks_allowed) {
        for (City j = 2; j <= registry.n_cities(); ++j) {
            const int k = w.n(j, 1);
            if (k == 0 || !w.can_mark(j)) continue;
            const double f = w.mark(j);
            w.layer(j, registry.n_cities() - 2, k * f);
            w.unmark(j);
        }
    }
    const double scale = registry.symmetric_links() ? 0.5 : 1.0;
    std::vector<std::pair<BasisState, double>> result;
    for (auto& [s, v] : w.out)
        if (v != 0.0) result.emplace_back(s, scale * v);
    return result;
}

std::vector<std::pair<BasisState, double>> q_combinatorial_apply_state(const ModeRegistry& registry,
                                                                       const BasisState& state,
                                                                       const std::optional<OccupationCutoff>& cutoff,
                                                                       FilterFault fault) {
    if (state.size() != registry.mode_count()) {
        throw ValidationError("q_combinatorial_apply_state: state has " + std::to_string(state.size()) + " entries, expected " +
                              std::to_string(registry.mode_count()));
    }
    for (std::size_t m = registry.link_count(); m < state.size(); ++m) {
        if (state[m] != 0) {
            throw ValidationError("q_combinatorial_apply_state: only hooker/marker vacuum inputs are supported (" +
                                  registry.label(m) + " = " + std::to_string(state[m]) + "); use the matrix Q");
        }
    }
    return q_combinatorial_apply(registry, std::vector<int>(state.begin(), state.begin() + registry.link_count()),
                                 cutoff, fault);
}

double q_vacuum_value(const ModeRegistry& registry, const std::vector<int>& links) {
    const int n = registry.n_cities();
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    auto occ = [&](City to, City from) { return links[*registry.link(to, from)]; };
    auto dfs = [&](auto&& self, City at, int depth) -> double {
        if (depth == n - 1) return occ(1, at);
        double sum = 0.0;
        for (City next = 2; next <= n; ++next) {
            if (used[next]) continue;
            const int k = occ(next, at);
            if (k == 0) continue;
            used[next] = true;
            sum += k * self(self, next, depth + 1);
            used[next] = false;
        }
        return sum;
    };
    const double q = dfs(dfs, 1, 0);
    return registry.symmetric_links() ? 0.5 * q : q;
}

} // namespace aqtsp::tsp
