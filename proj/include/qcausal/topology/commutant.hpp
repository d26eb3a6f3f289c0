#pragma once

// Points, neighbourhoods and topology derived from a commutation graph:
// complete sets of commuting observables are the maximal cliques, points are
// minimal non-empty intersections of them, and the topology is generated by
// commutant neighbourhoods.

#include <cstddef>
#include <vector>

#include "json.hpp"

#include "qcausal/topology/graph.hpp"

namespace qcausal::topology {

inline constexpr std::size_t kMaxCliqueVertices = 500;
inline constexpr std::size_t kMaxCliques = 100000;
inline constexpr std::size_t kMaxClosureSize = 100000;
inline constexpr std::size_t kMaxOpenSets = std::size_t{1} << 20;

/// Subsets of the point index range.
using PointMask = boost::dynamic_bitset<>;

enum class PointVariant {
    // Inclusion-minimal elements of the intersection closure of all cliques.
    SubfamilyIntersection,
    // For each observable, the intersection of every clique containing it.
    PerObservable,
};

const char* toString(PointVariant v);

struct PointSet {
    PointVariant variant = PointVariant::SubfamilyIntersection;
    std::vector<VertexSet> points;
    // observable index -> indices of the points containing it
    std::vector<std::vector<std::size_t>> membership;

    std::size_t size() const { return points.size(); }
    bool coversAllObservables() const;
};

struct TopologyFlags {
    bool isT0 = false;
    bool isT1 = false;
    bool pointsClosed = false;
    bool discrete = false;
};

struct FiniteTopology {
    std::size_t pointCount = 0;
    std::vector<PointMask> subbasis;
    // Smallest open set containing each point.
    std::vector<PointMask> minimalNeighborhoods;
    // Every open set in canonical order; left empty when sizeCapHit.
    std::vector<PointMask> openSets;
    // Exact when !sizeCapHit, otherwise the number reached before stopping.
    std::size_t openSetCount = 0;
    bool sizeCapHit = false;
    TopologyFlags flags;
};

struct TopologyReport {
    std::vector<VertexSet> cliques;
    PointSet points;
    PointSet perObservablePoints;
    // Point-level maximal commuting families, as point indices.
    std::vector<std::vector<std::size_t>> hypersurfaces;
    std::size_t maxHypersurfaceSize = 0;
    std::size_t specializationChainLength = 0;
    FiniteTopology topology;
};

/// Bron–Kerbosch with Tomita pivoting. Cliques are returned in canonical
/// order. Throws ValidationError above kMaxCliqueVertices vertices and
/// ResourceError above kMaxCliques cliques.
std::vector<VertexSet> maximalCliques(const CommutationGraph& g);

/// Closure of the clique family under non-empty pairwise intersection, in
/// canonical order. Throws ResourceError above kMaxClosureSize sets.
std::vector<VertexSet> intersectionClosure(const std::vector<VertexSet>& cliques);

PointSet pointsOfM(const CommutationGraph& g,
                   PointVariant variant = PointVariant::SubfamilyIntersection);
PointSet pointsFromCliques(const CommutationGraph& g, const std::vector<VertexSet>& cliques,
                           PointVariant variant);

/// Points y whose observables all commute with every observable of point x.
std::vector<std::size_t> commutantNeighborhood(const CommutationGraph& g, const PointSet& points,
                                               std::size_t pointIndex);

/// Topology generated by `subbasis` (finite intersections, then unions).
/// With includePointComplements the complement of every singleton joins the
/// subbasis first. Enumeration stops at kMaxOpenSets; flags are derived from
/// the minimal neighbourhoods and stay exact either way.
FiniteTopology generateTopology(const std::vector<PointMask>& subbasis, std::size_t pointCount,
                                bool includePointComplements);

/// Pairwise union/intersection closure check over the stored open sets.
bool isClosedUnderUnionAndIntersection(const FiniteTopology& t);

/// Number of points on the longest strict chain of the specialization
/// preorder (x ≤ y iff every open set containing x contains y).
std::size_t longestSpecializationChain(const FiniteTopology& t);

/// Commutation relation between points: i ~ j iff all their observables commute.
CommutationGraph pointCommutationGraph(const CommutationGraph& g, const PointSet& points);

TopologyReport topologyReport(const CommutationGraph& g, bool includePointComplements = false,
                              PointVariant variant = PointVariant::SubfamilyIntersection);

/// Stable JSON: points, cliques, openSetCount, flags, plus the hypersurface
/// and dimension-proxy blocks. Sets are emitted as sorted label lists.
nlohmann::json toJson(const TopologyReport& report, const CommutationGraph& g);

}  // namespace qcausal::topology
