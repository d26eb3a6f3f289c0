#include <random>

#include <gtest/gtest.h>

#include "qcausal/causal/order.hpp"
#include "qcausal/error.hpp"
#include "qcausal/reference/oracles.hpp"

using namespace qcausal;
using namespace qcausal::causal;

namespace {

EventSet pair(double t2, double x2) {
    return EventSet({{"e", 0.0, {0.0}, std::nullopt}, {"f", t2, {x2}, std::nullopt}});
}

struct F3 {
    EventSet events = fixtureF3();
    std::size_t e1 = *events.indexOf("e1");
    std::size_t e2 = *events.indexOf("e2");
    std::size_t e3 = *events.indexOf("e3");

    Orientation orient(bool e1First12, bool e1First13) const {
        Orientation o;
        o[{e1, e2}] = e1First12 ? DirectedEdge{e1, e2} : DirectedEdge{e2, e1};
        o[{e1, e3}] = e1First13 ? DirectedEdge{e1, e3} : DirectedEdge{e3, e1};
        return o;
    }
};

}  // namespace

TEST(EventSet, Validation) {
    EXPECT_THROW(EventSet({{"a", 0, {0}, {}}, {"a", 1, {0}, {}}}), ValidationError);
    EXPECT_THROW(EventSet({{"", 0, {0}, {}}}), ValidationError);
    EXPECT_THROW(EventSet({{"a", 0, {0}, {}}, {"b", 1, {0, 1}, {}}}), ValidationError);
    EXPECT_THROW(EventSet({{"a", std::nan(""), {0}, {}}}), ValidationError);
}

TEST(ClassicalOrder, Examples) {
    EXPECT_TRUE(classicalOrder(pair(2, 1)).precedes(0, 1));
    EXPECT_FALSE(classicalOrder(pair(1, 5)).comparable(0, 1));
    EXPECT_TRUE(classicalOrder(pair(1, 1)).precedes(0, 1));  // lightlike counts
    EXPECT_FALSE(classicalOrder(pair(0, 0)).comparable(0, 1));
    EXPECT_FALSE(classicalOrder(pair(2, 1)).precedes(1, 0));
}

TEST(ClassicalOrder, PartialOrderOnRandomSets) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto events = reference::randomEvents(10, 2, 3.0, rng);
        const auto o = classicalOrder(events);
        EXPECT_TRUE(o.isPartialOrder());
    }
}

TEST(ClassicalOrder, HigherDimensions) {
    const EventSet e({{"a", 0, {0, 0}, {}}, {"b", 2, {1, 1}, {}}, {"c", 1, {1, 1}, {}}});
    const auto o = classicalOrder(e);
    EXPECT_TRUE(o.precedes(0, 1));
    EXPECT_FALSE(o.comparable(0, 2));
}

TEST(F3Fixture, Geometry) {
    const F3 f;
    const auto o = classicalOrder(f.events);
    EXPECT_TRUE(o.precedes(f.e2, f.e3));
    EXPECT_FALSE(o.comparable(f.e1, f.e2));
    EXPECT_FALSE(o.comparable(f.e1, f.e3));
    EXPECT_EQ(freePairs(f.events), (std::vector<EventPair>{{f.e1, f.e2}, {f.e1, f.e3}}));
}

TEST(EnforcementEdges, ClassicalPairForced) {
    const F3 f;
    const auto edges = enforcementEdges(f.events, f.orient(true, true));
    ASSERT_EQ(edges.size(), 3u);
    EXPECT_NE(std::find(edges.begin(), edges.end(), DirectedEdge{f.e2, f.e3}), edges.end());
    EXPECT_NE(std::find(edges.begin(), edges.end(), DirectedEdge{f.e1, f.e2}), edges.end());
}

TEST(EnforcementEdges, Errors) {
    const F3 f;
    Orientation missing;
    missing[{f.e1, f.e2}] = {f.e1, f.e2};
    EXPECT_THROW(enforcementEdges(f.events, missing), ValidationError);
    auto contradict = f.orient(true, true);
    contradict[{f.e2, f.e3}] = {f.e3, f.e2};
    EXPECT_THROW(enforcementEdges(f.events, contradict), ValidationError);
    auto agreeing = f.orient(true, true);
    agreeing[{f.e2, f.e3}] = {f.e2, f.e3};
    EXPECT_NO_THROW(enforcementEdges(f.events, agreeing));
}

TEST(QuantumOrder, F3Examples) {
    const F3 f;
    const auto classical = classicalOrder(f.events);

    const auto a = quantumOrder(f.events, f.orient(true, true));
    ASSERT_TRUE(std::holds_alternative<CausalOrder>(a));
    EXPECT_TRUE(std::get<CausalOrder>(a).precedes(f.e1, f.e3));

    const auto b = quantumOrder(f.events, f.orient(true, false));
    ASSERT_TRUE(std::holds_alternative<CycleWitness>(b));
    const auto& cycle = std::get<CycleWitness>(b).cycle;
    EXPECT_EQ(cycle.front(), cycle.back());
    EXPECT_EQ(cycle.size(), 4u);

    const auto c = quantumOrder(f.events, f.orient(false, false));
    ASSERT_TRUE(std::holds_alternative<CausalOrder>(c));
    const auto& q = std::get<CausalOrder>(c);
    EXPECT_TRUE(q.precedes(f.e3, f.e1));
    EXPECT_GT(q.relationSize(), classical.relationSize());
}

TEST(QuantumOrder, ClosureMatchesDfsOracle) {
    std::mt19937_64 rng(12);
    int admissible = 0;
    for (int i = 0; i < 40; ++i) {
        const auto events = reference::randomEvents(7, 2, 2.0, rng);
        const auto free = freePairs(events);
        if (free.size() > 8) {
            continue;
        }
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << free.size()); ++idx) {
            const auto o = orientationFromIndex(free, idx);
            auto edges = enforcementEdges(events, o);
            const auto classical = classicalOrder(events);
            for (std::size_t a = 0; a < events.size(); ++a) {
                for (std::size_t b = 0; b < events.size(); ++b) {
                    if (classical.precedes(a, b)) {
                        edges.push_back({a, b});
                    }
                }
            }
            const auto reach = reference::reachability(events.size(), edges);
            bool cyclic = false;
            for (std::size_t a = 0; a < events.size(); ++a) {
                cyclic = cyclic || reach[a][a];
            }
            const auto result = quantumOrder(events, o);
            ASSERT_EQ(std::holds_alternative<CycleWitness>(result), cyclic);
            if (!cyclic) {
                ++admissible;
                const auto& q = std::get<CausalOrder>(result);
                EXPECT_TRUE(q.isPartialOrder());
                EXPECT_TRUE(q.contains(classical));
                for (std::size_t a = 0; a < events.size(); ++a) {
                    for (std::size_t b = 0; b < events.size(); ++b) {
                        ASSERT_EQ(q.precedes(a, b), static_cast<bool>(reach[a][b]));
                    }
                }
            }
        }
    }
    EXPECT_GT(admissible, 0);
}

TEST(Enumerate, F3Summary) {
    const F3 f;
    const auto s = enumerateAdmissibleOrientations(f.events);
    EXPECT_EQ(s.orientationCount, 4u);
    EXPECT_EQ(s.admissibleCount, 3u);
    EXPECT_TRUE(s.allPartialOrders);
    EXPECT_TRUE(s.allContainClassical);
    for (const auto& p : s.pairs) {
        if (p.pair == EventPair{f.e1, f.e3}) {
            EXPECT_FALSE(p.classicallyOrdered);
            EXPECT_EQ(p.comparability, Comparability::All);
        }
    }
}

TEST(Enumerate, PrecedenceDirectionVaries) {
    const F3 f;
    const auto s = enumerateAdmissibleOrientations(f.events);
    bool e1First = false;
    bool e3First = false;
    for (auto idx : s.admissibleIndices) {
        const auto q = std::get<CausalOrder>(quantumOrder(f.events, orientationFromIndex(s.freePairs, idx)));
        e1First = e1First || q.precedes(f.e1, f.e3);
        e3First = e3First || q.precedes(f.e3, f.e1);
    }
    EXPECT_TRUE(e1First);
    EXPECT_TRUE(e3First);
}

TEST(Enumerate, NoFreePairs) {
    const EventSet e({{"a", 0, {0}, "g"}, {"b", 2, {0}, "g"}, {"c", 0, {5}, "h"}, {"d", 3, {5}, "h"}});
    const auto s = enumerateAdmissibleOrientations(e);
    EXPECT_EQ(s.orientationCount, 1u);
    EXPECT_EQ(s.admissibleCount, 1u);
    const auto q = std::get<CausalOrder>(quantumOrder(e, {}));
    EXPECT_EQ(q, classicalOrder(e));
}

TEST(Enumerate, UngroupedEqualsClassical) {
    const EventSet e({{"a", 0, {0}, {}}, {"b", 1, {3}, {}}, {"c", 2, {0}, {}}});
    const auto q = std::get<CausalOrder>(quantumOrder(e, {}));
    EXPECT_EQ(q, classicalOrder(e));
    EXPECT_FALSE(strictExtensionCheck(classicalOrder(e), q).holds);
}

TEST(Enumerate, ThreadCountInvariant) {
    std::mt19937_64 rng(99);
    const auto events = reference::randomEvents(6, 1, 1.0, rng);
    const auto a = enumerateAdmissibleOrientations(events, 1);
    const auto b = enumerateAdmissibleOrientations(events, 4);
    EXPECT_EQ(a.admissibleIndices, b.admissibleIndices);
    ASSERT_EQ(a.pairs.size(), b.pairs.size());
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
        EXPECT_EQ(a.pairs[i].comparability, b.pairs[i].comparability);
    }
}

TEST(Enumerate, TooManyFreePairs) {
    std::vector<Event> events;
    for (int i = 0; i < 8; ++i) {
        events.push_back({"s" + std::to_string(i), 0.0, {10.0 * i}, "g"});
    }
    EXPECT_THROW(enumerateAdmissibleOrientations(EventSet(events)), ResourceError);  // 28 pairs
}

TEST(StrictExtension, Verdicts) {
    const F3 f;
    const auto classical = classicalOrder(f.events);
    const auto q = std::get<CausalOrder>(quantumOrder(f.events, f.orient(true, true)));
    const auto v = strictExtensionCheck(classical, q);
    EXPECT_TRUE(v.holds);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_TRUE(v.witness->first == f.e1 || v.witness->second == f.e1);

    EXPECT_FALSE(strictExtensionCheck(classical, classical).holds);

    const auto missing = strictExtensionCheck(classical, CausalOrder(classical.ids()));
    EXPECT_FALSE(missing.holds);
    ASSERT_TRUE(missing.violation.has_value());
    EXPECT_EQ(*missing.violation, (EventPair{f.e2, f.e3}));

    EXPECT_THROW(strictExtensionCheck(classical, CausalOrder({"x", "y", "z"})), ValidationError);
}

TEST(Boost, ClassicalOrderInvariant) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto e = reference::randomEvents(8, 1, 3.0, rng);
        for (double beta : {-0.9, -0.3, 0.5, 0.9}) {
            EXPECT_EQ(classicalOrder(causal::boost(e, beta)), classicalOrder(e));
        }
    }
    // Lightlike pairs stay ordered after boosting.
    EXPECT_TRUE(classicalOrder(causal::boost(pair(1, 1), 0.7)).precedes(0, 1));
    EXPECT_THROW(causal::boost(fixtureF3(), 1.0), ValidationError);
}

TEST(EarliestFirst, TiesBranch) {
    const F3 f;
    // e1 and e2 are simultaneous in this frame; e1 is earlier than e3.
    const auto os = earliestFirstOrientations(f.events);
    ASSERT_EQ(os.size(), 2u);
    for (const auto& o : os) {
        EXPECT_EQ(o.at({f.e1, f.e3}), (DirectedEdge{f.e1, f.e3}));
    }
    // A boost breaks the tie, and different frames may pick different directions.
    const auto left = earliestFirstOrientations(causal::boost(f.events, 0.5));
    const auto right = earliestFirstOrientations(causal::boost(f.events, -0.5));
    ASSERT_EQ(left.size(), 1u);
    ASSERT_EQ(right.size(), 1u);
    EXPECT_NE(left[0].at({f.e1, f.e2}), right[0].at({f.e1, f.e2}));
}

TEST(Emission, JsonAndHasse) {
    const F3 f;
    const auto classical = classicalOrder(f.events);
    const auto j = toJson(classical);
    EXPECT_EQ(j["events"], nlohmann::json::parse(R"(["e1","e2","e3"])"));
    EXPECT_EQ(j["relation"]["e2"], nlohmann::json::parse(R"(["e3"])"));
    EXPECT_EQ(hasseText(classical), "e2 -> e3\n");
    const auto q = std::get<CausalOrder>(quantumOrder(f.events, f.orient(true, true)));
    EXPECT_EQ(hasseText(q), "e1 -> e2\ne2 -> e3\n");
}
