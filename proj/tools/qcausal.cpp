// qcausal: run scenario files, the acceptance suite, or regenerate the
// lattice fixture.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qcausal/error.hpp"
#include "qcausal/runner/acceptance.hpp"
#include "qcausal/runner/golden.hpp"
#include "qcausal/runner/scenario.hpp"

namespace fs = std::filesystem;
using namespace qcausal;

namespace {

int runCommand(const std::string& file, const runner::RunOptions& options) {
    const auto scenario = runner::loadScenario(file);
    const auto report = runner::runScenario(scenario, options);
    std::cout << "kind: " << runner::toString(report.kind) << "  seed: " << report.seed << '\n';
    for (const auto& [name, value] : report.metrics) {
        std::cout << "  " << name << " = " << runner::formatNumber(value) << '\n';
    }
    for (const auto& w : report.warnings) {
        std::cout << "  warning: " << w << '\n';
    }
    for (const auto& [name, ok] : report.verdicts) {
        std::cout << (ok ? "  pass  " : "  FAIL  ") << name << '\n';
    }
    return runner::exitCode(report);
}

int checkCommand(const runner::AcceptanceOptions& options) {
    std::vector<runner::CriterionResult> results;
    for (int id = 1; id < runner::kCriterionCount; ++id) {
        results.push_back(runner::runCriterion(id, options));
        std::cout << runner::formatResult(results.back()) << std::endl;
    }
    const auto last = runner::runDeterminismCriterion(results, options);
    std::cout << runner::formatResult(last) << std::endl;
    results.push_back(last);
    int failed = 0;
    for (const auto& r : results) {
        failed += r.passed ? 0 : 1;
    }
    std::cout << (runner::kCriterionCount - failed) << "/" << runner::kCriterionCount
              << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 2;
}

int regenCommand(const fs::path& outDir, unsigned threads) {
    fs::create_directories(outDir);
    const auto path = runner::emitJson(runner::regenerateLatticeGolden(threads),
                                       outDir / "lattice_golden.json");
    std::cout << "wrote " << path.string() << " (UNVERIFIED)\n"
              << "confirm with: python3 tools/oracle/lattice_oracle.py --confirm " << path.string()
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement, emergent-cone and causal-order scenarios"};
    app.require_subcommand(1);

    std::string file;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> eps;

    auto* run = app.add_subcommand("run", "Run one scenario file");
    run->add_option("file", file, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory");
    run->add_option("--seed", seed, "Seed override");
    run->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1U, 256U));
    run->add_option("--eps", eps, "Commutation threshold for cone/topology")
        ->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check", "Run the full acceptance suite");
    check->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1U, 256U));
    check->add_option("--seed", seed, "Seed for sampled and randomized checks");

    auto* regen = app.add_subcommand("regen-fixtures", "Recompute the lattice golden file");
    regen->add_option("--out", out, "Directory for lattice_golden.json");
    regen->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1U, 256U));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage problems count as input validation failures.
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            runner::RunOptions options;
            if (out) {
                options.outDir = *out;
            }
            options.seed = seed;
            options.threads = threads;
            options.eps = eps;
            return runCommand(file, options);
        }
        if (*check) {
            runner::AcceptanceOptions options;
            options.threads = threads.value_or(1);
            options.seed = seed.value_or(runner::kDefaultSeed);
            return checkCommand(options);
        }
        return regenCommand(out.value_or("scenarios/fixtures"), threads.value_or(1));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
