#pragma once

// Free massive scalar field on a periodic 1+1D lattice. The field commutator
// [φ(x,t), φ(x',t')] = i·D(x−x', t−t') is an exact c-number mode sum, so
// "does this pair commute" is decided by |D| against a threshold.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qcausal/topology/graph.hpp"

namespace qcausal::lattice {

inline constexpr double kDefaultEps = 1e-3;

struct LatticeSpec {
    int sites = 64;        // N >= 8
    double mass = 1.0;     // m > 0, lattice units
    int timeSteps = 16;    // T >= 2 time slices
    double timeStep = 1.0;

    void validate() const;
};

/// ω_n = sqrt(m² + 4 sin²(π n / N)).
double dispersion(const LatticeSpec& spec, int modeIndex);

/// D(dx, dt) = (1/N) Σ_n sin(k_n dx − ω_n dt) / ω_n with k_n = 2π n / N.
/// dx is reduced mod N first, so D is exactly N-periodic in dx.
double pauliJordan(const LatticeSpec& spec, long dx, double dt);

/// −∂D/∂dt at dt = 0, i.e. (1/N) Σ_n cos(k_n dx): the equal-time
/// field/momentum commutator, a Kronecker delta on the periodic lattice.
double canonicalCheck(const LatticeSpec& spec, long dx);

/// D tabulated once per distinct separation: dx in [0, N), dt = s·timeStep
/// for integer s in [−(T−1), T−1].
class CommutatorField {
public:
    static CommutatorField compute(const LatticeSpec& spec, unsigned threads = 1);

    const LatticeSpec& spec() const { return spec_; }
    double at(long dx, long dtSteps) const;

    struct Row {
        long dx;
        double dt;
        double value;
    };
    /// Rows with dt >= 0, ordered by dt then dx; D at negative dt follows
    /// from antisymmetry.
    std::vector<Row> rows() const;

private:
    LatticeSpec spec_;
    std::vector<double> values_;
};

/// "x<x>t<t>", the vertex label used in emitted graphs.
std::string vertexLabel(int x, int t);

/// Vertex index of lattice point (x, t) in commutationGraph().
inline std::size_t vertexIndex(const LatticeSpec& spec, int x, int t) {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(spec.sites) +
           static_cast<std::size_t>(x);
}

struct LatticeGraph {
    topology::CommutationGraph graph;
    // Set when eps makes the graph complete or edgeless.
    std::optional<std::string> warning;
};

/// Vertices are the N·T points (x, t); (x, t) ~ (x', t') iff |D| < eps.
LatticeGraph commutationGraph(const LatticeSpec& spec, double eps, unsigned threads = 1);
LatticeGraph commutationGraph(const CommutatorField& field, double eps);

struct ConeEntry {
    int dt;
    int extent;
};

struct ConeProfile {
    // Δt = 0 first (reference row), then every integer Δt in [1, T/2].
    std::vector<ConeEntry> perTimeExtent;
    double fittedSpeed = 0.0;
    double intercept = 0.0;
    double threshold = kDefaultEps;
};

/// Largest |dx| <= N/2 with |D(±dx, Δt)| >= eps, or 0.
int extentAt(const CommutatorField& field, long dtSteps, double eps);

/// Least-squares line through extent(Δt), Δt in [1, T/2]. Requires T >= 8;
/// throws Error("no cone detected") when every extent is zero.
ConeProfile coneProfile(const LatticeSpec& spec, double eps, unsigned threads = 1);
ConeProfile coneProfile(const CommutatorField& field, double eps);

/// max over non-commuting pairs with 1 <= Δt <= T−1 of |dx| − (speed·Δt + intercept).
double coneExcess(const CommutatorField& field, double eps, double speed, double intercept);

}  // namespace qcausal::lattice
