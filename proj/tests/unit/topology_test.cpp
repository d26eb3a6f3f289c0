#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "qcausal/error.hpp"
#include "qcausal/lattice/field.hpp"
#include "qcausal/reference/oracles.hpp"
#include "qcausal/runner/golden.hpp"
#include "qcausal/topology/commutant.hpp"
#include "qcausal/topology/fixtures.hpp"

using namespace qcausal;
using namespace qcausal::topology;

namespace {

std::vector<std::vector<std::string>> labelled(const CommutationGraph& g,
                                               const std::vector<VertexSet>& sets) {
    std::vector<std::vector<std::string>> out;
    for (const auto& s : sets) {
        std::vector<std::string> names;
        for (auto v : members(s)) {
            names.push_back(g.label(v));
        }
        std::sort(names.begin(), names.end());
        out.push_back(names);
    }
    std::sort(out.begin(), out.end());
    return out;
}

using Names = std::vector<std::vector<std::string>>;

PointMask mask(std::size_t n, std::initializer_list<std::size_t> bits) {
    PointMask m(n);
    for (auto b : bits) {
        m.set(b);
    }
    return m;
}

}  // namespace

TEST(Graph, ParseEdgeList) {
    const auto g = CommutationGraph::parseEdgeList("# comment\nb a\nc\n\na d  # trailing\n");
    EXPECT_EQ(g.labels(), (std::vector<std::string>{"a", "b", "c", "d"}));
    EXPECT_TRUE(g.commutes(0, 1));
    EXPECT_TRUE(g.commutes(0, 3));
    EXPECT_FALSE(g.commutes(1, 3));
    EXPECT_TRUE(g.commutes(2, 2));
    EXPECT_EQ(g.edgeCount(), 2u);
    EXPECT_EQ(CommutationGraph::parseEdgeList(g.toEdgeList()).toEdgeList(), g.toEdgeList());
    EXPECT_THROW(CommutationGraph::parseEdgeList("a b c\n"), ValidationError);
    EXPECT_THROW(CommutationGraph::parseEdgeList("# nothing\n"), ValidationError);
    EXPECT_THROW(CommutationGraph({"a", "a"}), ValidationError);
}

TEST(MaximalCliques, Examples) {
    const auto k4 = fixtures::complete(4);
    const auto c = maximalCliques(k4);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].count(), 4u);

    const auto tt = fixtures::twoTriangles();
    EXPECT_EQ(labelled(tt, maximalCliques(tt)), (Names{{"a", "b", "c"}, {"d", "e", "f"}}));
}

TEST(MaximalCliques, LatticeSlicesAreCliques) {
    const lattice::LatticeSpec s{8, 1.0, 4, 1.0};
    const auto g = lattice::commutationGraph(s, 1e-3).graph;
    const auto cliques = maximalCliques(g);
    for (int t = 0; t < 4; ++t) {
        VertexSet slice(g.size());
        for (int x = 0; x < 8; ++x) {
            slice.set(lattice::vertexIndex(s, x, t));
        }
        EXPECT_NE(std::find(cliques.begin(), cliques.end(), slice), cliques.end()) << t;
    }
    EXPECT_GT(cliques.size(), 4u);
    const auto& golden = runner::latticeGolden()["topology"];
    EXPECT_EQ(cliques.size(), golden["cliqueCount"].get<std::size_t>());
    EXPECT_EQ(g.edgeCount(), golden["edgeCount"].get<std::size_t>());
    EXPECT_EQ(intersectionClosure(cliques).size(),
              golden["intersectionClosureSize"].get<std::size_t>());
}

TEST(MaximalCliques, AgreesWithBruteForce) {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 60; ++i) {
        const auto g = reference::randomGraph(1 + i % 14, 0.2 + 0.01 * i, rng);
        EXPECT_EQ(maximalCliques(g), reference::bruteMaximalCliques(g));
    }
}

TEST(MaximalCliques, SoundAndMaximal) {
    std::mt19937_64 rng(5);
    const auto g = reference::randomGraph(40, 0.5, rng);
    for (const auto& k : maximalCliques(g)) {
        VertexSet common(g.size());
        common.set();
        for (auto v : members(k)) {
            EXPECT_TRUE(k.is_subset_of(g.neighbors(v)));
            common &= g.neighbors(v);
        }
        EXPECT_EQ(common, k);
    }
}

TEST(MaximalCliques, VertexCap) {
    EXPECT_THROW(maximalCliques(fixtures::chain(501, 1)), ValidationError);
}

TEST(MaximalCliques, CliqueCap) {
    // Complement of a perfect matching on 2k vertices has 2^k maximal cliques.
    const std::size_t k = 17;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < 2 * k; ++i) {
        labels.push_back("v" + std::to_string(i));
    }
    CommutationGraph g(labels);
    for (std::size_t a = 0; a < 2 * k; ++a) {
        for (std::size_t b = a + 1; b < 2 * k; ++b) {
            if (!(a % 2 == 0 && b == a + 1)) {
                g.connect(a, b);
            }
        }
    }
    EXPECT_THROW(maximalCliques(g), ResourceError);
}

TEST(PointsOfM, DisjointCliques) {
    const auto g = fixtures::twoTriangles();
    for (auto v : {PointVariant::SubfamilyIntersection, PointVariant::PerObservable}) {
        EXPECT_EQ(labelled(g, pointsOfM(g, v).points), (Names{{"a", "b", "c"}, {"d", "e", "f"}}));
    }
}

TEST(PointsOfM, BowtieVariantsDiverge) {
    const auto g = fixtures::bowtie();
    const auto sub = pointsOfM(g, PointVariant::SubfamilyIntersection);
    EXPECT_EQ(labelled(g, sub.points), (Names{{"v"}}));
    EXPECT_FALSE(sub.coversAllObservables());
    const auto per = pointsOfM(g, PointVariant::PerObservable);
    EXPECT_EQ(labelled(g, per.points), (Names{{"a", "b", "v"}, {"c", "d", "v"}, {"v"}}));
    EXPECT_TRUE(per.coversAllObservables());
    EXPECT_EQ(labelled(g, reference::bruteSubfamilyPoints(reference::bruteMaximalCliques(g))),
              (Names{{"v"}}));
}

TEST(PointsOfM, CompleteGraphSinglePoint) {
    const auto g = fixtures::complete(5);
    const auto p = pointsOfM(g);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p.points[0].count(), 5u);
}

TEST(PointsOfM, SubfamilyPointsAreAntichain) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 40; ++i) {
        const auto g = reference::randomGraph(10, 0.5, rng);
        const auto p = pointsOfM(g);
        for (const auto& a : p.points) {
            EXPECT_TRUE(a.any());
            for (const auto& b : p.points) {
                EXPECT_FALSE(a.is_proper_subset_of(b));
            }
        }
        EXPECT_TRUE(pointsOfM(g, PointVariant::PerObservable).coversAllObservables());
    }
}

TEST(PointsOfM, LatticeMinimalPointsAreSingletons) {
    const auto g = lattice::commutationGraph(lattice::LatticeSpec{8, 1.0, 4, 1.0}, 1e-3).graph;
    const auto p = pointsOfM(g);
    EXPECT_EQ(p.size(), 32u);
    for (const auto& s : p.points) {
        EXPECT_EQ(s.count(), 1u);
    }
}

TEST(CommutantNeighborhood, Examples) {
    const auto tt = fixtures::twoTriangles();
    const auto pt = pointsOfM(tt);
    for (std::size_t i = 0; i < pt.size(); ++i) {
        EXPECT_EQ(commutantNeighborhood(tt, pt, i), std::vector<std::size_t>{i});
    }
    const auto k = fixtures::complete(3);
    const auto pk = pointsOfM(k, PointVariant::PerObservable);
    EXPECT_EQ(commutantNeighborhood(k, pk, 0).size(), pk.size());
}

TEST(CommutantNeighborhood, LatticeMatchesCommutatorTable) {
    const lattice::LatticeSpec s{8, 1.0, 4, 1.0};
    const auto field = lattice::CommutatorField::compute(s);
    const auto g = lattice::commutationGraph(field, 1e-3).graph;
    const auto p = pointsOfM(g);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto v = members(p.points[i]).front();
        const int x = static_cast<int>(v % 8);
        const int t = static_cast<int>(v / 8);
        for (auto j : commutantNeighborhood(g, p, i)) {
            const auto w = members(p.points[j]).front();
            EXPECT_LT(std::abs(field.at(x - static_cast<int>(w % 8), t - static_cast<int>(w / 8))),
                      1e-3);
        }
        if (t == 0) {
            // Next-slice point on the same site lies inside the cone.
            const auto above = lattice::vertexIndex(s, x, 1);
            const auto nb = commutantNeighborhood(g, p, i);
            EXPECT_TRUE(std::none_of(nb.begin(), nb.end(), [&](std::size_t j) {
                return p.points[j].test(above);
            }));
        }
    }
}

TEST(GenerateTopology, DiscreteFromSingletons) {
    std::vector<PointMask> sub;
    for (std::size_t i = 0; i < 4; ++i) {
        sub.push_back(mask(4, {i}));
    }
    const auto t = generateTopology(sub, 4, false);
    EXPECT_EQ(t.openSetCount, 16u);
    EXPECT_TRUE(t.flags.pointsClosed);
    EXPECT_TRUE(t.flags.discrete);
    EXPECT_TRUE(isClosedUnderUnionAndIntersection(t));
}

TEST(GenerateTopology, IndiscreteFromWholeSet) {
    const auto t = generateTopology({mask(3, {0, 1, 2})}, 3, false);
    EXPECT_EQ(t.openSetCount, 2u);
    EXPECT_FALSE(t.flags.pointsClosed);
    EXPECT_FALSE(t.flags.isT0);
    EXPECT_FALSE(t.flags.discrete);
}

TEST(GenerateTopology, SierpinskiIsT0NotT1) {
    const auto t = generateTopology({mask(2, {0})}, 2, false);
    EXPECT_EQ(t.openSetCount, 3u);
    EXPECT_TRUE(t.flags.isT0);
    EXPECT_FALSE(t.flags.isT1);
    EXPECT_EQ(longestSpecializationChain(t), 2u);
    const auto withComplements = generateTopology({mask(2, {0})}, 2, true);
    EXPECT_TRUE(withComplements.flags.discrete);
}

TEST(GenerateTopology, ContainsEmptyAndFull) {
    const auto t = generateTopology({mask(5, {0, 1}), mask(5, {1, 2, 3})}, 5, false);
    EXPECT_NE(std::find(t.openSets.begin(), t.openSets.end(), PointMask(5)), t.openSets.end());
    PointMask full(5);
    full.set();
    EXPECT_NE(std::find(t.openSets.begin(), t.openSets.end(), full), t.openSets.end());
    EXPECT_TRUE(isClosedUnderUnionAndIntersection(t));
}

TEST(GenerateTopology, PointsClosedImpliesDiscrete) {
    std::mt19937_64 rng(31);
    std::bernoulli_distribution bit(0.4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 7;
        std::vector<PointMask> sub;
        for (int k = 0; k < 4; ++k) {
            PointMask m(n);
            for (std::size_t i = 0; i < n; ++i) {
                m[i] = bit(rng);
            }
            sub.push_back(m);
        }
        const auto t = generateTopology(sub, n, trial % 3 == 0);
        EXPECT_TRUE(isClosedUnderUnionAndIntersection(t));
        if (t.flags.pointsClosed) {
            EXPECT_TRUE(t.flags.discrete);
        }
        EXPECT_EQ(t.flags.isT1, t.flags.pointsClosed);
    }
}

TEST(GenerateTopology, CapKeepsFlagsExact) {
    // 24 singletons generate 2^24 open sets, beyond the enumeration cap.
    std::vector<PointMask> sub;
    for (std::size_t i = 0; i < 24; ++i) {
        sub.push_back(mask(24, {i}));
    }
    const auto t = generateTopology(sub, 24, false);
    EXPECT_TRUE(t.sizeCapHit);
    EXPECT_TRUE(t.openSets.empty());
    EXPECT_TRUE(t.flags.discrete);
    EXPECT_TRUE(t.flags.pointsClosed);
}

TEST(TopologyReport, ChainSingletonHypersurfaces) {
    const auto g = fixtures::chain(4, 3);
    const auto r = topologyReport(g);
    EXPECT_EQ(r.points.size(), 4u);
    ASSERT_EQ(r.hypersurfaces.size(), 4u);
    for (const auto& h : r.hypersurfaces) {
        EXPECT_EQ(h.size(), 1u);
    }
    EXPECT_TRUE(r.topology.flags.discrete);
    EXPECT_EQ(r.maxHypersurfaceSize, 1u);
}

TEST(TopologyReport, CompleteGraph) {
    const auto r = topologyReport(fixtures::complete(4));
    ASSERT_EQ(r.hypersurfaces.size(), 1u);
    EXPECT_EQ(r.hypersurfaces[0].size(), 1u);
    EXPECT_EQ(r.points.size(), 1u);
}

TEST(TopologyReport, LatticeHypersurfaceSpansSlice) {
    const auto g = lattice::commutationGraph(lattice::LatticeSpec{8, 1.0, 4, 1.0}, 1e-3).graph;
    const auto r = topologyReport(g);
    EXPECT_GE(r.maxHypersurfaceSize, 8u);
    EXPECT_TRUE(r.topology.flags.isT0);
}

TEST(TopologyReport, JsonShape) {
    const auto g = fixtures::bowtie();
    const auto j = toJson(topologyReport(g), g);
    for (const char* key : {"points", "cliques", "openSetCount", "flags"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["points"], nlohmann::json::parse(R"([["v"]])"));
    EXPECT_EQ(j.dump(), toJson(topologyReport(g), g).dump());
}
