#pragma once

// Lattice reference values produced by the high-precision mode-sum oracle
// (tools/oracle/lattice_oracle.py) and compiled into the binary.

#include "json.hpp"

namespace qcausal::runner {

const nlohmann::json& latticeGolden();

/// Recomputes every block of the golden file in double precision. The result
/// carries status "UNVERIFIED" until the oracle script confirms it.
nlohmann::json regenerateLatticeGolden(unsigned threads = 1);

}  // namespace qcausal::runner
