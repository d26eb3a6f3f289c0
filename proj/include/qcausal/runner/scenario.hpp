#pragma once

// Flat `key = value` scenario files, their dispatch to the physics modules
// and the CSV/JSON artifacts they leave behind.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qcausal::runner {

enum class Kind { Bell, Chsh, Lhv, Epr, Eraser, Cone, Topology, Order };

const char* toString(Kind k);
std::optional<Kind> kindFromString(std::string_view name);

struct Scenario {
    Kind kind = Kind::Bell;
    // Raw values keyed by name, already type-checked against the kind's schema.
    std::map<std::string, std::string> parameters;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> outputPath;
    // Directory that relative paths inside the scenario resolve against.
    std::filesystem::path baseDir = ".";

    bool has(const std::string& key) const { return parameters.count(key) != 0; }
};

/// Throws ValidationError for a missing or unknown kind, unknown keys,
/// malformed lines and values that do not parse as the key's type.
Scenario parseScenario(std::string_view text);
Scenario loadScenario(const std::filesystem::path& file);

struct RunOptions {
    std::optional<std::filesystem::path> outDir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;  // falls back to the scenario's key, then 1
    std::optional<double> eps;  // cone/topology threshold override
};

struct RunReport {
    Kind kind = Kind::Bell;
    std::map<std::string, std::string> inputs;
    std::uint64_t seed = 0;
    std::map<std::string, double> metrics;
    std::map<std::string, bool> verdicts;
    std::vector<std::string> artifacts;  // relative to the output directory
    std::vector<std::string> warnings;

    bool passed() const;
    nlohmann::json toJson() const;
};

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr const char* kDefaultOutDir = "out";

/// Runs the scenario and writes its artifacts plus report.json into the
/// output directory. Module errors are rethrown with the kind prefixed.
RunReport runScenario(const Scenario& s, const RunOptions& options = {});

/// 0 when every verdict passes, 2 otherwise.
int exitCode(const RunReport& report);

/// Shortest round-trip decimal form, '.' separator.
std::string formatNumber(double value);

/// x, y, z with optional sign, xz(<degrees>) in the x–z plane, or "a, b, c".
std::optional<std::array<double, 3>> parseAxis(std::string_view text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::filesystem::path emitCsv(const CsvTable& table, const std::filesystem::path& path);
std::filesystem::path emitJson(const nlohmann::json& value, const std::filesystem::path& path);

}  // namespace qcausal::runner
