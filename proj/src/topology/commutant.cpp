#include "qcausal/topology/commutant.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <unordered_set>

#include <boost/functional/hash.hpp>

#include "qcausal/error.hpp"

namespace qcausal::topology {

namespace {

struct MemberwiseLess {
    bool operator()(const VertexSet& a, const VertexSet& b) const { return memberwiseLess(a, b); }
};

class CliqueSearch {
public:
    explicit CliqueSearch(const CommutationGraph& g) : n_(g.size()) {
        open_.reserve(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            VertexSet nb = g.neighbors(v);
            nb.reset(v);
            open_.push_back(std::move(nb));
        }
    }

    std::vector<VertexSet> run() {
        VertexSet r(n_);
        VertexSet p(n_);
        p.set();
        expand(r, p, VertexSet(n_));
        std::sort(found_.begin(), found_.end(), memberwiseLess);
        return std::move(found_);
    }

private:
    void expand(VertexSet& r, VertexSet p, VertexSet x) {
        if (p.none()) {
            if (x.none()) {
                if (found_.size() >= kMaxCliques) {
                    throw ResourceError("maximal clique count exceeds " + std::to_string(kMaxCliques));
                }
                found_.push_back(r);
            }
            return;
        }
        // Pivot on the vertex of P ∪ X with the most neighbours in P.
        const VertexSet px = p | x;
        std::size_t pivot = VertexSet::npos;
        std::size_t bestCover = 0;
        for (auto u = px.find_first(); u != VertexSet::npos; u = px.find_next(u)) {
            const std::size_t cover = (p & open_[u]).count();
            if (pivot == VertexSet::npos || cover > bestCover) {
                bestCover = cover;
                pivot = u;
            }
        }
        const VertexSet candidates = p - open_[pivot];
        for (auto v = candidates.find_first(); v != VertexSet::npos; v = candidates.find_next(v)) {
            r.set(v);
            expand(r, p & open_[v], x & open_[v]);
            r.reset(v);
            p.reset(v);
            x.set(v);
        }
    }

    std::size_t n_;
    std::vector<VertexSet> open_;
    std::vector<VertexSet> found_;
};

std::vector<VertexSet> minimalElements(const std::vector<VertexSet>& family) {
    std::vector<VertexSet> out;
    for (const auto& s : family) {
        const bool minimal = std::none_of(family.begin(), family.end(), [&](const VertexSet& t) {
            return t.is_proper_subset_of(s);
        });
        if (minimal) {
            out.push_back(s);
        }
    }
    return out;
}

// Closure of {∅} under union with each generator; returns false on overflow.
template <class Key, class Hash>
bool enumerateUnions(const std::vector<Key>& generators, const Key& empty, std::vector<Key>& order) {
    std::unordered_set<Key, Hash> seen;
    seen.insert(empty);
    order.assign(1, empty);
    for (const auto& g : generators) {
        const std::size_t known = order.size();
        for (std::size_t i = 0; i < known; ++i) {
            Key u = order[i] | g;
            if (seen.insert(u).second) {
                if (order.size() == kMaxOpenSets) {
                    return false;
                }
                order.push_back(std::move(u));
            }
        }
    }
    return true;
}

PointMask toMask(std::uint64_t bits, std::size_t n) {
    PointMask m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if ((bits >> i) & 1u) {
            m.set(i);
        }
    }
    return m;
}

std::uint64_t toWord(const PointMask& m) {
    std::uint64_t w = 0;
    for (auto i = m.find_first(); i != PointMask::npos; i = m.find_next(i)) {
        w |= std::uint64_t{1} << i;
    }
    return w;
}

nlohmann::json labelSets(const std::vector<VertexSet>& sets, const CommutationGraph& g) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : sets) {
        nlohmann::json one = nlohmann::json::array();
        for (auto v : members(s)) {
            one.push_back(g.label(v));
        }
        out.push_back(std::move(one));
    }
    return out;
}

}  // namespace

std::vector<VertexSet> intersectionClosure(const std::vector<VertexSet>& cliques) {
    std::set<VertexSet, MemberwiseLess> family(cliques.begin(), cliques.end());
    std::vector<VertexSet> all(family.begin(), family.end());
    std::vector<VertexSet> frontier = all;
    while (!frontier.empty()) {
        std::vector<VertexSet> next;
        for (const auto& f : frontier) {
            const std::size_t known = all.size();
            for (std::size_t i = 0; i < known; ++i) {
                VertexSet meet = f & all[i];
                if (meet.none() || !family.insert(meet).second) {
                    continue;
                }
                if (family.size() > kMaxClosureSize) {
                    throw ResourceError("intersection closure exceeds " +
                                        std::to_string(kMaxClosureSize) + " sets");
                }
                all.push_back(meet);
                next.push_back(std::move(meet));
            }
        }
        frontier = std::move(next);
    }
    return {family.begin(), family.end()};
}

const char* toString(PointVariant v) {
    return v == PointVariant::SubfamilyIntersection ? "subfamilyIntersection" : "perObservable";
}

bool PointSet::coversAllObservables() const {
    return std::all_of(membership.begin(), membership.end(),
                       [](const auto& m) { return !m.empty(); });
}

std::vector<VertexSet> maximalCliques(const CommutationGraph& g) {
    if (g.size() > kMaxCliqueVertices) {
        throw ValidationError("clique enumeration limited to " + std::to_string(kMaxCliqueVertices) +
                              " vertices");
    }
    return CliqueSearch(g).run();
}

PointSet pointsFromCliques(const CommutationGraph& g, const std::vector<VertexSet>& cliques,
                           PointVariant variant) {
    PointSet ps;
    ps.variant = variant;
    if (variant == PointVariant::SubfamilyIntersection) {
        ps.points = minimalElements(intersectionClosure(cliques));
    } else {
        std::set<VertexSet, MemberwiseLess> unique;
        for (std::size_t o = 0; o < g.size(); ++o) {
            VertexSet meet(g.size());
            meet.set();
            for (const auto& c : cliques) {
                if (c.test(o)) {
                    meet &= c;
                }
            }
            unique.insert(std::move(meet));
        }
        ps.points.assign(unique.begin(), unique.end());
    }
    std::sort(ps.points.begin(), ps.points.end(), memberwiseLess);
    ps.membership.assign(g.size(), {});
    for (std::size_t p = 0; p < ps.points.size(); ++p) {
        for (auto o : members(ps.points[p])) {
            ps.membership[o].push_back(p);
        }
    }
    return ps;
}

PointSet pointsOfM(const CommutationGraph& g, PointVariant variant) {
    return pointsFromCliques(g, maximalCliques(g), variant);
}

std::vector<std::size_t> commutantNeighborhood(const CommutationGraph& g, const PointSet& points,
                                               std::size_t pointIndex) {
    if (pointIndex >= points.size()) {
        throw ValidationError("point index out of range");
    }
    VertexSet common(g.size());
    common.set();
    for (auto o : members(points.points[pointIndex])) {
        common &= g.neighbors(o);
    }
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < points.size(); ++y) {
        if (points.points[y].is_subset_of(common)) {
            out.push_back(y);
        }
    }
    return out;
}

FiniteTopology generateTopology(const std::vector<PointMask>& subbasis, std::size_t pointCount,
                                bool includePointComplements) {
    FiniteTopology t;
    t.pointCount = pointCount;
    t.subbasis = subbasis;
    for (const auto& s : t.subbasis) {
        if (s.size() != pointCount) {
            throw ValidationError("subbasis member does not match the point count");
        }
    }
    if (includePointComplements) {
        for (std::size_t x = 0; x < pointCount; ++x) {
            PointMask c(pointCount);
            c.set();
            c.reset(x);
            t.subbasis.push_back(std::move(c));
        }
    }

    // The empty intersection is the whole space, so every point has a neighbourhood.
    t.minimalNeighborhoods.assign(pointCount, PointMask(pointCount));
    for (std::size_t x = 0; x < pointCount; ++x) {
        PointMask& u = t.minimalNeighborhoods[x];
        u.set();
        for (const auto& s : t.subbasis) {
            if (s.test(x)) {
                u &= s;
            }
        }
    }

    auto& f = t.flags;
    f.isT0 = true;
    f.pointsClosed = true;
    f.discrete = true;
    for (std::size_t x = 0; x < pointCount; ++x) {
        const PointMask& ux = t.minimalNeighborhoods[x];
        if (ux.count() != 1) {
            f.discrete = false;
        }
        for (std::size_t y = 0; y < pointCount; ++y) {
            if (x == y || !ux.test(y)) {
                continue;
            }
            // Every open set around x also contains y, so X \ {y} is not open.
            f.pointsClosed = false;
            if (t.minimalNeighborhoods[y].test(x)) {
                f.isT0 = false;
            }
        }
    }
    f.isT1 = f.pointsClosed;
    // A finite space whose points are closed is discrete.
    assert(!f.pointsClosed || f.discrete);

    std::vector<PointMask> generators = t.minimalNeighborhoods;
    std::sort(generators.begin(), generators.end(), memberwiseLess);
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());

    bool complete = false;
    if (pointCount <= 64) {
        std::vector<std::uint64_t> words;
        words.reserve(generators.size());
        for (const auto& g : generators) {
            words.push_back(toWord(g));
        }
        std::vector<std::uint64_t> order;
        complete = enumerateUnions<std::uint64_t, std::hash<std::uint64_t>>(words, 0, order);
        t.openSetCount = order.size();
        if (complete) {
            t.openSets.reserve(order.size());
            for (auto w : order) {
                t.openSets.push_back(toMask(w, pointCount));
            }
        }
    } else {
        std::vector<PointMask> order;
        complete = enumerateUnions<PointMask, boost::hash<PointMask>>(generators, PointMask(pointCount),
                                                                      order);
        t.openSetCount = order.size();
        if (complete) {
            t.openSets = std::move(order);
        }
    }
    t.sizeCapHit = !complete;
    std::sort(t.openSets.begin(), t.openSets.end(), memberwiseLess);
    return t;
}

bool isClosedUnderUnionAndIntersection(const FiniteTopology& t) {
    if (t.sizeCapHit) {
        return false;
    }
    std::set<PointMask, MemberwiseLess> opens(t.openSets.begin(), t.openSets.end());
    PointMask full(t.pointCount);
    full.set();
    if (!opens.count(PointMask(t.pointCount)) || !opens.count(full)) {
        return false;
    }
    for (std::size_t i = 0; i < t.openSets.size(); ++i) {
        for (std::size_t j = i + 1; j < t.openSets.size(); ++j) {
            if (!opens.count(t.openSets[i] | t.openSets[j]) ||
                !opens.count(t.openSets[i] & t.openSets[j])) {
                return false;
            }
        }
    }
    return true;
}

std::size_t longestSpecializationChain(const FiniteTopology& t) {
    const std::size_t n = t.pointCount;
    const auto& u = t.minimalNeighborhoods;
    std::vector<std::size_t> depth(n, 0);
    std::function<std::size_t(std::size_t)> visit = [&](std::size_t x) -> std::size_t {
        if (depth[x] != 0) {
            return depth[x];
        }
        std::size_t best = 0;
        for (auto y = u[x].find_first(); y != PointMask::npos; y = u[x].find_next(y)) {
            if (y != x && !u[y].test(x)) {
                best = std::max(best, visit(y));
            }
        }
        depth[x] = best + 1;
        return depth[x];
    };
    std::size_t longest = 0;
    for (std::size_t x = 0; x < n; ++x) {
        longest = std::max(longest, visit(x));
    }
    return longest;
}

CommutationGraph pointCommutationGraph(const CommutationGraph& g, const PointSet& points) {
    std::vector<std::string> labels;
    labels.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        labels.push_back("p" + std::to_string(i));
    }
    CommutationGraph pg(std::move(labels));
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (auto j : commutantNeighborhood(g, points, i)) {
            if (j > i) {
                pg.connect(i, j);
            }
        }
    }
    return pg;
}

TopologyReport topologyReport(const CommutationGraph& g, bool includePointComplements,
                              PointVariant variant) {
    TopologyReport r;
    r.cliques = maximalCliques(g);
    r.points = pointsFromCliques(g, r.cliques, variant);
    r.perObservablePoints = pointsFromCliques(g, r.cliques, PointVariant::PerObservable);

    const CommutationGraph pg = pointCommutationGraph(g, r.points);
    for (const auto& h : maximalCliques(pg)) {
        r.hypersurfaces.push_back(members(h));
        r.maxHypersurfaceSize = std::max(r.maxHypersurfaceSize, h.count());
    }

    std::vector<PointMask> subbasis;
    subbasis.reserve(r.points.size());
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        PointMask m(r.points.size());
        for (auto j : commutantNeighborhood(g, r.points, i)) {
            m.set(j);
        }
        subbasis.push_back(std::move(m));
    }
    r.topology = generateTopology(subbasis, r.points.size(), includePointComplements);
    r.specializationChainLength = longestSpecializationChain(r.topology);
    return r;
}

nlohmann::json toJson(const TopologyReport& r, const CommutationGraph& g) {
    nlohmann::json j;
    j["cliques"] = labelSets(r.cliques, g);
    j["points"] = labelSets(r.points.points, g);
    j["pointVariant"] = toString(r.points.variant);
    j["perObservablePoints"] = labelSets(r.perObservablePoints.points, g);
    j["coverage"] = {{toString(r.points.variant), r.points.coversAllObservables()},
                     {"perObservable", r.perObservablePoints.coversAllObservables()}};
    j["hypersurfaces"] = r.hypersurfaces;
    j["openSetCount"] = r.topology.openSetCount;
    j["sizeCapHit"] = r.topology.sizeCapHit;
    j["flags"] = {{"isT0", r.topology.flags.isT0},
                  {"isT1", r.topology.flags.isT1},
                  {"pointsClosed", r.topology.flags.pointsClosed},
                  {"discrete", r.topology.flags.discrete}};
    j["dimensionProxy"] = {{"specializationChainLength", r.specializationChainLength},
                           {"maxHypersurfaceSize", r.maxHypersurfaceSize}};
    return j;
}

}  // namespace qcausal::topology
