#include <cstdlib>
#include <iostream>
#include <map>
#include <thread>

#include <gtest/gtest.h>

#include "qcausal/runner/acceptance.hpp"

using namespace qcausal::runner;

namespace {

AcceptanceOptions options() {
    AcceptanceOptions o;
    o.threads = std::max(2u, std::thread::hardware_concurrency());
    if (const char* t = std::getenv("QCAUSAL_THREADS")) {
        o.threads = static_cast<unsigned>(std::max(1, std::atoi(t)));
    }
    return o;
}

// Criterion 12 needs the verdicts of 1..11; each is computed once.
const CriterionResult& criterion(int id) {
    static std::map<int, CriterionResult> cache;
    auto it = cache.find(id);
    if (it == cache.end()) {
        it = cache.emplace(id, runCriterion(id, options())).first;
    }
    return it->second;
}

void report(const CriterionResult& r) {
    std::cout << formatResult(r) << std::endl;
    EXPECT_TRUE(r.passed) << r.detail;
}

}  // namespace

TEST(Acceptance, C01_EprPerfectCorrelation) { report(criterion(1)); }
TEST(Acceptance, C02_QuantumLhvGap) { report(criterion(2)); }
TEST(Acceptance, C03_NoSignalingMarginals) { report(criterion(3)); }
TEST(Acceptance, C04_GhzUnanimousCollapse) { report(criterion(4)); }
TEST(Acceptance, C05_EraserVisibilities) { report(criterion(5)); }
TEST(Acceptance, C06_LatticeCommutatorStructure) { report(criterion(6)); }
TEST(Acceptance, C07_EmergentCone) { report(criterion(7)); }
TEST(Acceptance, C08_SingletonHypersurfaces) { report(criterion(8)); }
TEST(Acceptance, C09_PointsOracleEquivalence) { report(criterion(9)); }
TEST(Acceptance, C10_StrongerOrderingOnF3) { report(criterion(10)); }
TEST(Acceptance, C11_BoostInvariance) { report(criterion(11)); }

TEST(Acceptance, C12_Determinism) {
    std::vector<CriterionResult> earlier;
    for (int id = 1; id < kCriterionCount; ++id) {
        earlier.push_back(criterion(id));
    }
    report(runDeterminismCriterion(earlier, options()));
}
