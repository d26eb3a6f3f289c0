#pragma once

// EPR correlations, CHSH against local hidden variables, GHZ states and a
// two-qubit which-path eraser, all computed through the state-vector engine.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qcausal/quantum/core.hpp"

namespace qcausal::entanglement {

using quantum::Axis;
using quantum::StateVector;

struct CorrelationSetting {
    Axis axisA;
    Axis axisB;
};

enum class Side { A = 0, B = 1 };

/// Deterministic local strategy: a fixed ±1 answer per (side, setting).
struct LhvStrategy {
    std::array<int, 4> responses{1, 1, 1, 1};

    int response(Side side, int setting) const {
        return responses[static_cast<std::size_t>(side) * 2 + static_cast<std::size_t>(setting)];
    }
};

struct LhvSummary {
    double max = 0.0;
    double min = 0.0;
    std::size_t strategiesVisited = 0;
};

/// Measurement angles in degrees, measured from +z towards +x.
struct ChshAngles {
    double a0 = 0.0;
    double a1 = 0.0;
    double b0 = 0.0;
    double b1 = 0.0;
};

struct ChshOptimum {
    ChshAngles angles;
    double value = 0.0;
    std::size_t anglesPerAxis = 0;
};

struct EraserConfig {
    bool marking = false;
    bool erasure = false;
    int phaseSamples = 16;
};

struct FringePoint {
    double phase;
    double probability;
};

// (|u…u⟩ + |d…d⟩)/√2 on two sites.
StateVector bellPhiPlus();

// (|u…u⟩ + |d…d⟩)/√2 on n ≥ 2 sites.
StateVector ghz(int n);

/// Number of spin-1/2 sites; throws unless the dimension is a power of two ≥ 2.
std::size_t siteCount(const StateVector& psi);

/// Joint outcome table p[a][b] for spin along axisA at siteA and axisB at
/// siteB; index 0 is the +1 outcome.
std::array<std::array<double, 2>, 2> jointProbabilities(const StateVector& psi,
                                                        const CorrelationSetting& setting,
                                                        std::size_t siteA, std::size_t siteB);

/// E = Σ a·b·p(a, b).
double correlation(const StateVector& psi, const CorrelationSetting& setting,
                   std::size_t siteA, std::size_t siteB);

/// S = E(a0,b0) + E(a0,b1) + E(a1,b0) − E(a1,b1) between sites 0 and 1.
double chsh(const StateVector& psi, const Axis& a0, const Axis& a1, const Axis& b0,
            const Axis& b1);

/// Exhaustive grid search over x–z-plane angles k·step in [0°, 360°).
/// The correlation table is evaluated by the engine (optionally on several
/// threads); the b-settings decouple, so each (a0, a1) needs only two scans.
ChshOptimum maximizeChsh(const StateVector& psi, double gridDegrees, unsigned threads = 1);

double chshValue(const LhvStrategy& strategy);

/// All 16 deterministic strategies. Shared randomness is a convex mixture of
/// these, so it cannot exceed their maximum.
LhvSummary enumerateLhvStrategies();

double lhvMaxChsh();

/// Largest spread of one site's +1 marginal while the other site's axis
/// sweeps x–z angles k·gridDegrees; both sites take a turn being fixed.
double marginalShift(const StateVector& psi, double gridDegrees);

/// Sequential simulation on Φ⁺: sample site 0 along axisA, collapse, then
/// sample site 1 along axisB. Returns the fraction of equal outcomes.
double eprConsistency(const Axis& axisA, const Axis& axisB, int trials, std::uint64_t seed);
double eprConsistency(const Axis& axis, int trials, std::uint64_t seed);

/// Measures `site` along `axis`; for each possible branch, collapses and
/// returns the smallest probability that every other site then gives the same
/// outcome along the same axis.
double forcedAgreement(const StateVector& psi, const Axis& axis, std::size_t site);

/// Detection probability of the path qubit's + outcome (x basis) as the
/// relative phase sweeps [0, π] in phaseSamples steps, both ends included.
std::vector<FringePoint> eraserFringe(const EraserConfig& cfg);

/// (max − min) / (max + min) of eraserFringe.
double eraserVisibility(const EraserConfig& cfg);

}  // namespace qcausal::entanglement
