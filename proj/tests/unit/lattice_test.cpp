#include <cmath>

#include <gtest/gtest.h>

#include "qcausal/error.hpp"
#include "qcausal/lattice/field.hpp"
#include "qcausal/runner/golden.hpp"

using namespace qcausal;
using namespace qcausal::lattice;

namespace {

LatticeSpec spec64() { return {64, 1.0, 16, 1.0}; }

}  // namespace

TEST(LatticeSpec, Validation) {
    EXPECT_NO_THROW(spec64().validate());
    EXPECT_THROW((LatticeSpec{7, 1.0, 4, 1.0}.validate()), ValidationError);
    EXPECT_THROW((LatticeSpec{8, 0.0, 4, 1.0}.validate()), ValidationError);
    EXPECT_THROW((LatticeSpec{8, 1.0, 1, 1.0}.validate()), ValidationError);
    EXPECT_THROW((LatticeSpec{8, 1.0, 4, 0.0}.validate()), ValidationError);
}

TEST(Dispersion, Examples) {
    const LatticeSpec s{16, 0.7, 4, 1.0};
    EXPECT_DOUBLE_EQ(dispersion(s, 0), 0.7);
    EXPECT_NEAR(dispersion(s, 8), std::sqrt(0.49 + 4.0), 1e-15);
    for (int n = 1; n < 16; ++n) {
        EXPECT_NEAR(dispersion(s, n), dispersion(s, 16 - n), 1e-15);
        EXPECT_GT(dispersion(s, n), 0.0);
    }
    EXPECT_THROW(dispersion(s, 16), ValidationError);
    EXPECT_THROW(dispersion(s, -1), ValidationError);
}

TEST(PauliJordan, EqualTimeVanishes) {
    const auto s = spec64();
    EXPECT_LE(std::abs(pauliJordan(s, 5, 0.0)), 1e-12);
    for (long dx = -70; dx <= 70; ++dx) {
        EXPECT_LE(std::abs(pauliJordan(s, dx, 0.0)), 1e-12) << dx;
    }
    EXPECT_EQ(pauliJordan(LatticeSpec{9, 0.3, 2, 1.0}, 0, 0.0), 0.0);
}

TEST(PauliJordan, GoldenValue) {
    const double golden = runner::latticeGolden()["pauliJordan"]["dx0dt1"].get<double>();
    EXPECT_NEAR(pauliJordan(spec64(), 0, 1.0), golden, 1e-13);
    EXPECT_NEAR(golden, -0.5832542191732643, 1e-15);
}

TEST(PauliJordan, AntisymmetryAndPeriodicity) {
    const auto s = spec64();
    for (long dx = -30; dx <= 30; dx += 3) {
        for (double dt : {0.5, 1.0, 3.0, 9.5}) {
            EXPECT_LE(std::abs(pauliJordan(s, dx, dt) + pauliJordan(s, -dx, -dt)), 1e-12);
            EXPECT_EQ(pauliJordan(s, dx, dt), pauliJordan(s, dx + 64, dt));
        }
    }
}

TEST(CanonicalCheck, KroneckerDelta) {
    const auto s = spec64();
    EXPECT_NEAR(canonicalCheck(s, 0), 1.0, 1e-12);
    EXPECT_NEAR(canonicalCheck(s, 3), 0.0, 1e-12);
    EXPECT_NEAR(canonicalCheck(s, 64), 1.0, 1e-12);
    EXPECT_NEAR(canonicalCheck(s, -64), 1.0, 1e-12);
}

TEST(CanonicalCheck, MatchesTimeDerivative) {
    const auto s = spec64();
    const double h = 1e-5;
    for (long dx : {0L, 1L, 2L, 7L}) {
        const double deriv = -(pauliJordan(s, dx, h) - pauliJordan(s, dx, -h)) / (2 * h);
        EXPECT_NEAR(deriv, canonicalCheck(s, dx), 1e-8);
    }
}

TEST(CommutatorField, MatchesDirectSum) {
    const auto s = spec64();
    const auto f = CommutatorField::compute(s, 3);
    for (long dx = -10; dx <= 70; dx += 7) {
        for (long dt = -15; dt <= 15; dt += 4) {
            EXPECT_EQ(f.at(dx, dt), pauliJordan(s, dx, static_cast<double>(dt)));
        }
    }
    EXPECT_THROW(f.at(0, 16), ValidationError);
    EXPECT_EQ(f.rows().size(), 64u * 16u);
}

TEST(CommutatorField, ThreadCountInvariant) {
    const auto s = spec64();
    const auto a = CommutatorField::compute(s, 1);
    const auto b = CommutatorField::compute(s, 5);
    for (long dx = 0; dx < 64; ++dx) {
        for (long dt = -15; dt <= 15; ++dt) {
            ASSERT_EQ(a.at(dx, dt), b.at(dx, dt));
        }
    }
}

TEST(CommutationGraph, EqualTimePairsCommute) {
    const LatticeSpec s{16, 1.0, 4, 1.0};
    const auto g = commutationGraph(s, 1e-3).graph;
    EXPECT_EQ(g.size(), 64u);
    for (int t = 0; t < 4; ++t) {
        for (int a = 0; a < 16; ++a) {
            for (int b = 0; b < 16; ++b) {
                EXPECT_TRUE(g.commutes(vertexIndex(s, a, t), vertexIndex(s, b, t)));
            }
        }
    }
    EXPECT_EQ(g.label(vertexIndex(s, 3, 2)), "x3t2");
}

TEST(CommutationGraph, NextSliceSameSiteDoesNotCommute) {
    const auto s = spec64();
    const auto g = commutationGraph(LatticeSpec{64, 1.0, 2, 1.0}, 1e-3).graph;
    EXPECT_FALSE(g.commutes(vertexIndex(s, 5, 0), vertexIndex(s, 5, 1)));
}

TEST(CommutationGraph, SymmetricAndTranslationInvariant) {
    const LatticeSpec s{12, 0.8, 5, 1.0};
    const auto g = commutationGraph(s, 1e-3).graph;
    for (int x = 0; x < 12; ++x) {
        for (int t = 0; t < 5; ++t) {
            for (int y = 0; y < 12; ++y) {
                for (int u = 0; u < 5; ++u) {
                    const auto a = vertexIndex(s, x, t);
                    const auto b = vertexIndex(s, y, u);
                    ASSERT_EQ(g.commutes(a, b), g.commutes(b, a));
                    ASSERT_EQ(g.commutes(a, b),
                              g.commutes(vertexIndex(s, (x + 5) % 12, t), vertexIndex(s, (y + 5) % 12, u)));
                }
            }
        }
    }
}

TEST(CommutationGraph, DegenerateEpsWarns) {
    const LatticeSpec s{8, 1.0, 3, 1.0};
    EXPECT_TRUE(commutationGraph(s, 100.0).warning.has_value());
    EXPECT_TRUE(commutationGraph(s, 100.0).graph.isComplete());
    EXPECT_FALSE(commutationGraph(s, 1e-3).warning.has_value());
    EXPECT_THROW(commutationGraph(s, 0.0), ValidationError);
}

TEST(ConeProfile, MatchesGoldenFixture) {
    const auto& g = runner::latticeGolden()["cone"];
    const auto p = coneProfile(LatticeSpec{128, 0.1, 32, 1.0}, 1e-3, 4);
    std::vector<int> extents;
    for (const auto& e : p.perTimeExtent) {
        extents.push_back(e.extent);
    }
    EXPECT_EQ(extents, g["extents"].get<std::vector<int>>());
    EXPECT_NEAR(p.fittedSpeed, g["fittedSpeed"].get<double>(), 1e-12);
    EXPECT_NEAR(p.intercept, g["intercept"].get<double>(), 1e-12);
    EXPECT_EQ(p.perTimeExtent.front().dt, 0);
    EXPECT_EQ(p.perTimeExtent.front().extent, 0);
}

TEST(ConeProfile, ExtentsBoundedAndNearlyMonotone) {
    const auto p = coneProfile(LatticeSpec{128, 0.4, 32, 1.0}, 1e-3);
    int best = 0;
    for (const auto& e : p.perTimeExtent) {
        EXPECT_GE(e.extent, 0);
        EXPECT_LE(e.extent, 64);
        EXPECT_GE(e.extent, best - 2);
        best = std::max(best, e.extent);
    }
    EXPECT_GT(p.fittedSpeed, 0.0);
}

TEST(ConeProfile, ContainmentWithinFixtureBroadening) {
    const auto& g = runner::latticeGolden()["containment"];
    const auto field = CommutatorField::compute(LatticeSpec{64, 1.0, 16, 1.0});
    const int w = g["lightConeBroadening"].get<int>();
    EXPECT_LE(coneExcess(field, 1e-3, 1.0, 0.0), w);
    EXPECT_GT(coneExcess(field, 1e-3, 1.0, 0.0), w - 1);  // the fixture is tight
}

TEST(ConeProfile, HeavierMassNeverBeatsLightLimitByTenPercent) {
    const double light = coneProfile(LatticeSpec{128, 0.1, 32, 1.0}, 1e-3).fittedSpeed;
    for (double m : {0.2, 0.4, 0.8, 1.6}) {
        const double v = coneProfile(LatticeSpec{128, m, 32, 1.0}, 1e-3).fittedSpeed;
        EXPECT_LE(v, light * 1.1) << m;
    }
    for (const auto& entry : runner::latticeGolden()["massSweep"]) {
        const double m = entry["mass"].get<double>();
        EXPECT_NEAR(coneProfile(LatticeSpec{128, m, 32, 1.0}, 1e-3).fittedSpeed,
                    entry["fittedSpeed"].get<double>(), 1e-12);
    }
}

TEST(ConeProfile, Errors) {
    EXPECT_THROW(coneProfile(LatticeSpec{64, 1.0, 7, 1.0}, 1e-3), ValidationError);
    EXPECT_THROW(coneProfile(LatticeSpec{64, 1.0, 16, 1.0}, 10.0), Error);
    try {
        coneProfile(LatticeSpec{64, 1.0, 16, 1.0}, 10.0);
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("no cone detected"), std::string::npos);
    }
}

TEST(ManySlices, ReferenceVertexCommutesAcrossSlices) {
    const LatticeSpec s{64, 1.0, 16, 1.0};
    const auto g = commutationGraph(s, 1e-3).graph;
    std::vector<int> slices;
    for (int t = 1; t < 16; ++t) {
        for (int x = 0; x < 64; ++x) {
            if (g.commutes(vertexIndex(s, 0, 0), vertexIndex(s, x, t))) {
                slices.push_back(t);
                break;
            }
        }
    }
    EXPECT_GE(slices.size(), 2u);
    EXPECT_EQ(slices, runner::latticeGolden()["containment"]["commutingSlices"].get<std::vector<int>>());
}
