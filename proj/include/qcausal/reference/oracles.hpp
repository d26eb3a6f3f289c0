#pragma once

// Deliberately naive re-implementations used to cross-check the main
// algorithms. Exponential on purpose; keep inputs small.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "qcausal/causal/order.hpp"
#include "qcausal/topology/graph.hpp"

namespace qcausal::reference {

/// Every vertex subset tested for being a maximal clique (≤ 20 vertices).
std::vector<topology::VertexSet> bruteMaximalCliques(const topology::CommutationGraph& g);

/// Inclusion-minimal non-empty intersections over all 2^k − 1 non-empty
/// subfamilies of `cliques` (k ≤ 20), in canonical order.
std::vector<topology::VertexSet> bruteSubfamilyPoints(const std::vector<topology::VertexSet>& cliques);

/// G(n, p) graph with labels "v0".."v<n-1>".
topology::CommutationGraph randomGraph(std::size_t vertices, double density, std::mt19937_64& rng);

/// Reachability by depth-first search from every vertex over `edges`.
std::vector<std::vector<bool>> reachability(std::size_t n,
                                            const std::vector<causal::DirectedEdge>& edges);

/// n events in 1+1D with coordinates in [-range, range] and up to `groups`
/// entanglement groups (some events left ungrouped).
causal::EventSet randomEvents(std::size_t n, std::size_t groups, double range, std::mt19937_64& rng);

}  // namespace qcausal::reference
