#include "qcausal/reference/oracles.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "qcausal/error.hpp"

namespace qcausal::reference {

using topology::CommutationGraph;
using topology::VertexSet;

namespace {

struct Less {
    bool operator()(const VertexSet& a, const VertexSet& b) const {
        return topology::memberwiseLess(a, b);
    }
};

}  // namespace

std::vector<VertexSet> bruteMaximalCliques(const CommutationGraph& g) {
    const std::size_t n = g.size();
    if (n > 20) {
        throw ValidationError("brute-force clique oracle is limited to 20 vertices");
    }
    auto isClique = [&](std::uint32_t mask) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if ((mask >> a & 1U) && (mask >> b & 1U) && !g.commutes(a, b)) {
                    return false;
                }
            }
        }
        return true;
    };
    std::set<VertexSet, Less> out;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
        if (!isClique(mask)) {
            continue;
        }
        bool maximal = true;
        for (std::size_t v = 0; v < n && maximal; ++v) {
            if (!(mask >> v & 1U) && isClique(mask | (std::uint32_t{1} << v))) {
                maximal = false;
            }
        }
        if (maximal) {
            VertexSet s(n);
            for (std::size_t v = 0; v < n; ++v) {
                if (mask >> v & 1U) {
                    s.set(v);
                }
            }
            out.insert(s);
        }
    }
    return {out.begin(), out.end()};
}

std::vector<VertexSet> bruteSubfamilyPoints(const std::vector<VertexSet>& cliques) {
    const std::size_t k = cliques.size();
    if (k == 0 || k > 20) {
        throw ValidationError("brute-force subfamily oracle needs 1..20 cliques");
    }
    std::set<VertexSet, Less> meets;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << k); ++mask) {
        VertexSet meet;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask >> i & 1U) {
                meet = meet.empty() ? cliques[i] : (meet & cliques[i]);
            }
        }
        if (meet.any()) {
            meets.insert(meet);
        }
    }
    std::vector<VertexSet> out;
    for (const auto& s : meets) {
        if (std::none_of(meets.begin(), meets.end(),
                         [&](const VertexSet& t) { return t.is_proper_subset_of(s); })) {
            out.push_back(s);
        }
    }
    return out;
}

CommutationGraph randomGraph(std::size_t vertices, double density, std::mt19937_64& rng) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < vertices; ++i) {
        labels.push_back("v" + std::to_string(i));
    }
    CommutationGraph g(std::move(labels));
    std::bernoulli_distribution edge(density);
    for (std::size_t a = 0; a < vertices; ++a) {
        for (std::size_t b = a + 1; b < vertices; ++b) {
            if (edge(rng)) {
                g.connect(a, b);
            }
        }
    }
    return g;
}

std::vector<std::vector<bool>> reachability(std::size_t n,
                                            const std::vector<causal::DirectedEdge>& edges) {
    std::vector<std::vector<std::size_t>> out(n);
    for (const auto& e : edges) {
        out[e.from].push_back(e.to);
    }
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> stack(out[s].begin(), out[s].end());
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            if (reach[s][v]) {
                continue;
            }
            reach[s][v] = true;
            stack.insert(stack.end(), out[v].begin(), out[v].end());
        }
    }
    return reach;
}

causal::EventSet randomEvents(std::size_t n, std::size_t groups, double range,
                              std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coord(-range, range);
    std::uniform_int_distribution<std::size_t> pick(0, groups);
    std::vector<causal::Event> events;
    for (std::size_t i = 0; i < n; ++i) {
        causal::Event e;
        e.id = "e" + std::to_string(i);
        e.t = coord(rng);
        e.x = {coord(rng)};
        const auto gidx = pick(rng);
        if (gidx < groups) {
            e.group = "g" + std::to_string(gidx);
        }
        events.push_back(std::move(e));
    }
    return causal::EventSet(std::move(events));
}

}  // namespace qcausal::reference
