#include "qcausal/runner/golden.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qcausal/lattice/field.hpp"
#include "qcausal/topology/commutant.hpp"

namespace qcausal::runner {

namespace detail {
extern const char* const kLatticeGoldenText;
}

using nlohmann::json;

namespace {

constexpr double kEps = 1e-3;

json coneBlock(int sites, double mass, int steps, unsigned threads, std::vector<double>& margins) {
    lattice::LatticeSpec spec{sites, mass, steps, 1.0};
    const auto field = lattice::CommutatorField::compute(spec, threads);
    std::vector<int> ext;
    for (int dt = 0; dt < steps; ++dt) {
        for (int dx = 0; dx <= sites / 2; ++dx) {
            margins.push_back(std::abs(std::abs(field.at(dx, dt)) - kEps) / kEps);
        }
        ext.push_back(lattice::extentAt(field, dt, kEps));
    }
    const auto profile = lattice::coneProfile(field, kEps);
    double broadening = -1e300;
    int lightCone = -1 << 30;
    for (int t = 1; t < steps; ++t) {
        broadening = std::max(broadening, ext[t] - (profile.fittedSpeed * t + profile.intercept));
        lightCone = std::max(lightCone, ext[t] - t);
    }
    std::vector<int> slices;
    for (int t = 1; t < steps; ++t) {
        for (int x = 0; x < sites; ++x) {
            if (std::abs(field.at(-x, -t)) < kEps) {
                slices.push_back(t);
                break;
            }
        }
    }
    return {
        {"sites", sites},
        {"mass", mass},
        {"timeSteps", steps},
        {"eps", kEps},
        {"extents", std::vector<int>(ext.begin(), ext.begin() + steps / 2 + 1)},
        {"fullExtents", ext},
        {"fittedSpeed", profile.fittedSpeed},
        {"intercept", profile.intercept},
        {"broadening", broadening},
        {"lightConeBroadening", lightCone},
        {"commutingSlices", slices},
    };
}

json topologyBlock(int sites, int steps, double mass, unsigned threads) {
    const lattice::LatticeSpec spec{sites, mass, steps, 1.0};
    const auto g = lattice::commutationGraph(spec, kEps, threads).graph;
    const auto cliques = topology::maximalCliques(g);
    bool slicesPresent = true;
    for (int t = 0; t < steps; ++t) {
        topology::VertexSet slice(g.size());
        for (int x = 0; x < sites; ++x) {
            slice.set(lattice::vertexIndex(spec, x, t));
        }
        slicesPresent = slicesPresent && std::find(cliques.begin(), cliques.end(), slice) != cliques.end();
    }
    std::size_t maxClique = 0;
    for (const auto& c : cliques) {
        maxClique = std::max(maxClique, c.count());
    }
    const auto points = topology::pointsFromCliques(g, cliques,
                                                    topology::PointVariant::SubfamilyIntersection);
    const bool singletons = std::all_of(points.points.begin(), points.points.end(),
                                        [](const auto& p) { return p.count() == 1; });
    return {
        {"sites", sites},
        {"timeSteps", steps},
        {"mass", mass},
        {"eps", kEps},
        {"edgeCount", g.edgeCount()},
        {"cliqueCount", cliques.size()},
        {"maxCliqueSize", maxClique},
        {"slicesAreCliques", slicesPresent},
        {"intersectionClosureSize", topology::intersectionClosure(cliques).size()},
        {"minimalPointCount", points.size()},
        {"minimalPointsAreSingletons", singletons},
    };
}

}  // namespace

const json& latticeGolden() {
    static const json golden = json::parse(detail::kLatticeGoldenText);
    return golden;
}

json regenerateLatticeGolden(unsigned threads) {
    std::vector<double> margins;
    const lattice::LatticeSpec spec64{64, 1.0, 2, 1.0};
    double equalTime = 0.0;
    for (int dx = 0; dx < 64; ++dx) {
        equalTime = std::max(equalTime, std::abs(lattice::pauliJordan(spec64, dx, 0.0)));
    }
    json out;
    out["status"] = "UNVERIFIED (regenerated in double precision; confirm with lattice_oracle.py)";
    out["pauliJordan"] = {
        {"sites", 64},
        {"mass", 1.0},
        {"dx0dt1", lattice::pauliJordan(spec64, 0, 1.0)},
        {"equalTimeMaxAbs", equalTime},
    };
    out["containment"] = coneBlock(64, 1.0, 16, threads, margins);
    out["cone"] = coneBlock(128, 0.1, 32, threads, margins);
    json sweep = json::array();
    for (double mass : {0.1, 0.2, 0.4, 0.8, 1.6}) {
        sweep.push_back({{"mass", mass},
                         {"fittedSpeed", coneBlock(128, mass, 32, threads, margins)["fittedSpeed"]}});
    }
    out["massSweep"] = std::move(sweep);
    out["topology"] = topologyBlock(8, 4, 1.0, threads);
    out["minThresholdMargin"] = *std::min_element(margins.begin(), margins.end());
    return out;
}

}  // namespace qcausal::runner
