#pragma once

// The twelve acceptance criteria, shared by the acceptance test binary and
// `qcausal check`.

#include <cstdint>
#include <string>
#include <vector>

namespace qcausal::runner {

struct AcceptanceOptions {
    unsigned threads = 1;
    std::uint64_t seed = 1;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;  // observed values behind the verdict
    double seconds = 0.0;
};

inline constexpr int kCriterionCount = 12;

/// Criteria 1..11 individually.
CriterionResult runCriterion(int id, const AcceptanceOptions& options = {});

/// Criterion 12 given the results of 1..11: everything passed and the
/// bundled scenarios rerun byte-identically.
CriterionResult runDeterminismCriterion(const std::vector<CriterionResult>& earlier,
                                        const AcceptanceOptions& options = {});

std::vector<CriterionResult> runAcceptance(const AcceptanceOptions& options = {});

/// "PASS  7  Emergent cone ... | detail (1.23 s)"
std::string formatResult(const CriterionResult& r);

}  // namespace qcausal::runner
