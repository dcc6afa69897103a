#include "aqtsp/oracle/classify.hpp"

#include "aqtsp/common.hpp"

#include <numeric>

namespace aqtsp::oracle {

using fock::City;

namespace {

struct Graph {
    int n;
    std::vector<std::vector<int>> arc;  // arc[to][from], 1-based
    std::vector<int> in, out;

    bool edge(City a, City b) const { return arc[a][b] > 0 || arc[b][a] > 0; }
};

Graph build(const fock::ModeRegistry& reg, const std::vector<int>& links) {
    const int n = reg.n_cities();
    Graph g{n, std::vector<std::vector<int>>(n + 1, std::vector<int>(n + 1, 0)), std::vector<int>(n + 1, 0),
            std::vector<int>(n + 1, 0)};
    for (std::size_t m = 0; m < reg.link_count(); ++m) {
        const int k = links[m];
        if (k == 0) continue;
        const auto& p = reg.link_modes()[m];
        g.arc[p.to][p.from] += k;
        if (reg.symmetric_links()) g.arc[p.from][p.to] += k;
    }
    for (City to = 1; to <= n; ++to)
        for (City from = 1; from <= n; ++from) {
            g.in[to] += g.arc[to][from];
            g.out[from] += g.arc[to][from];
        }
    return g;
}

bool has_hamiltonian_cycle(const Graph& g) {
    std::vector<bool> used(static_cast<std::size_t>(g.n) + 1, false);
    auto dfs = [&](auto&& self, City at, int depth) -> bool {
        if (depth == g.n - 1) return g.arc[1][at] > 0;
        for (City next = 2; next <= g.n; ++next) {
            if (used[next] || g.arc[next][at] == 0) continue;
            used[next] = true;
            if (self(self, next, depth + 1)) return true;
            used[next] = false;
        }
        return false;
    };
    used[1] = true;
    return dfs(dfs, 1, 0);
}

// Weakly connected component of city 1.
std::vector<bool> component_of_one(const Graph& g) {
    std::vector<bool> seen(static_cast<std::size_t>(g.n) + 1, false);
    std::vector<City> stack = {1};
    seen[1] = true;
    while (!stack.empty()) {
        const City c = stack.back();
        stack.pop_back();
        for (City o = 1; o <= g.n; ++o) {
            if (!seen[o] && g.edge(c, o)) {
                seen[o] = true;
                stack.push_back(o);
            }
        }
    }
    return seen;
}

// True when the support inside the component is one simple cycle: every
// member has exactly one distinct successor and one distinct predecessor
// (two distinct neighbours in symmetric registries, or a single edge).
bool simple_cycle(const Graph& g, const std::vector<bool>& comp, bool symmetric) {
    int members = 0;
    for (City c = 1; c <= g.n; ++c) {
        if (!comp[c]) continue;
        ++members;
        int succ = 0, pred = 0, nbrs = 0;
        for (City o = 1; o <= g.n; ++o) {
            succ += g.arc[o][c] > 0;
            pred += g.arc[c][o] > 0;
            nbrs += g.edge(c, o);
        }
        if (symmetric) {
            if (nbrs != 2 && !(nbrs == 1 && members <= 2)) return false;
        } else if (succ != 1 || pred != 1) {
            return false;
        }
    }
    if (symmetric && members == 2) return true;
    return members >= 2;
}

} // namespace

std::string to_string(ConfigClass c) {
    switch (c) {
    case ConfigClass::connected_complete_tour: return "connected_complete_tour";
    case ConfigClass::no_start_link: return "no_start_link";
    case ConfigClass::short_tour: return "short_tour";
    case ConfigClass::incomplete: return "incomplete";
    case ConfigClass::revisit_incomplete: return "revisit_incomplete";
    case ConfigClass::disjoint_subtours: return "disjoint_subtours";
    case ConfigClass::broken: return "broken";
    case ConfigClass::multi_traversal_tour: return "multi_traversal_tour";
    case ConfigClass::other: return "other";
    }
    return "other";
}

const std::vector<ConfigClass>& elimination_classes() {
    static const std::vector<ConfigClass> classes = {
        ConfigClass::no_start_link,      ConfigClass::short_tour,        ConfigClass::incomplete,
        ConfigClass::revisit_incomplete, ConfigClass::disjoint_subtours, ConfigClass::broken,
    };
    return classes;
}

ConfigClass classify_configuration(const fock::ModeRegistry& registry, const std::vector<int>& links) {
    if (links.size() != registry.link_count()) {
        throw ValidationError("classify_configuration: expected " + std::to_string(registry.link_count()) +
                              " link occupations, got " + std::to_string(links.size()));
    }
    const Graph g = build(registry, links);
    const int n = g.n;

    if (has_hamiltonian_cycle(g)) {
        int total = 0, support = 0, biggest = 0;
        for (int k : links) {
            total += k;
            support += k > 0;
            biggest = std::max(biggest, k);
        }
        if (support != n) return ConfigClass::other;
        return biggest == 1 ? ConfigClass::connected_complete_tour : ConfigClass::multi_traversal_tour;
    }
    if (g.out[1] == 0) return ConfigClass::no_start_link;
    for (City c = 1; c <= n; ++c)
        if (g.in[c] != g.out[c]) return ConfigClass::broken;

    const auto comp = component_of_one(g);
    bool all_visited = true;
    for (City c = 1; c <= n; ++c)
        if (g.in[c] + g.out[c] == 0) all_visited = false;

    if (!all_visited) {
        int reachable = 0;
        for (std::size_t m = 0; m < registry.link_count(); ++m) {
            const auto& p = registry.link_modes()[m];
            if (comp[p.to] || comp[p.from]) reachable += links[m];
        }
        if (reachable < n) return ConfigClass::short_tour;
        return simple_cycle(g, comp, registry.symmetric_links()) ? ConfigClass::incomplete
                                                                 : ConfigClass::revisit_incomplete;
    }
    for (City c = 1; c <= n; ++c)
        if (!comp[c]) return ConfigClass::disjoint_subtours;
    return ConfigClass::other;
}

ConfigClass classify_state(const fock::ModeRegistry& registry, const fock::BasisState& state) {
    if (state.size() != registry.mode_count()) {
        throw ValidationError("classify_state: state size does not match the registry");
    }
    for (std::size_t m = registry.link_count(); m < state.size(); ++m)
        if (state[m] != 0)
            throw ValidationError("classify_state: hooker/marker sector must be empty (" + registry.label(m) + ")");
    return classify_configuration(registry, std::vector<int>(state.begin(), state.begin() + registry.link_count()));
}

std::vector<std::vector<int>> configurations_of_class(const fock::ModeRegistry& registry, ConfigClass c,
                                                      int per_mode_max, int max_link_total) {
    fock::OccupationCutoff cut;
    cut.per_mode_max = per_mode_max;
    cut.link_total_max = max_link_total;
    cut.hooker_total_max = 0;
    cut.marker_total_max = 0;
    const fock::FockBasis basis(registry, cut);
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        auto links = basis.link_occupations(i);
        if (classify_configuration(registry, links) == c) out.push_back(std::move(links));
    }
    return out;
}

} // namespace aqtsp::oracle
