#pragma once

// Small named commutation graphs shared by tests, scenarios and the
// acceptance suite.

#include <cstddef>

#include "qcausal/topology/graph.hpp"

namespace qcausal::topology::fixtures {

/// Every observable commutes with every other.
CommutationGraph complete(std::size_t n);

/// `slices` disjoint cliques of `sliceSize` observables, labelled "t<i>o<j>":
/// each time's observables commute only among themselves.
CommutationGraph chain(std::size_t slices, std::size_t sliceSize);

/// Two triangles {a, b, v} and {c, d, v} sharing the single vertex v.
CommutationGraph bowtie();

/// Two disjoint triangles.
CommutationGraph twoTriangles();

}  // namespace qcausal::topology::fixtures
