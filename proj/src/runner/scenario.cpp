#include "qcausal/runner/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qcausal/causal/order.hpp"
#include "qcausal/entanglement/lab.hpp"
#include "qcausal/error.hpp"
#include "qcausal/lattice/field.hpp"
#include "qcausal/reference/oracles.hpp"
#include "qcausal/topology/commutant.hpp"
#include "qcausal/topology/fixtures.hpp"

namespace qcausal::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Type { Real, Int, Bool, Axis, Text, Event };

struct KeySpec {
    const char* name;
    Type type;
    bool required = false;
    std::vector<const char*> choices = {};
};

const std::vector<KeySpec>& commonKeys() {
    static const std::vector<KeySpec> keys = {
        {"seed", Type::Int},
        {"out", Type::Text},
        {"threads", Type::Int},
    };
    return keys;
}

const std::vector<KeySpec>& schema(Kind k) {
    static const std::map<Kind, std::vector<KeySpec>> table = {
        {Kind::Bell, {{"axis", Type::Axis, true}, {"axisB", Type::Axis}, {"trials", Type::Int},
                      {"parties", Type::Int}}},
        {Kind::Chsh, {{"grid", Type::Real}, {"minValue", Type::Real}}},
        {Kind::Lhv, {{"grid", Type::Real}, {"minQuantum", Type::Real}}},
        {Kind::Epr, {{"axisA", Type::Axis, true}, {"axisB", Type::Axis, true},
                     {"trials", Type::Int}, {"tolerance", Type::Real}, {"grid", Type::Real}}},
        {Kind::Eraser, {{"marking", Type::Bool}, {"erasure", Type::Bool}, {"samples", Type::Int},
                        {"expectVisibility", Type::Real}}},
        {Kind::Cone, {{"sites", Type::Int}, {"mass", Type::Real}, {"timeSteps", Type::Int},
                      {"timeStep", Type::Real}, {"eps", Type::Real},
                      {"speedTolerance", Type::Real}, {"broadening", Type::Real}}},
        {Kind::Topology,
         {{"source", Type::Text, true, {"lattice", "chain", "complete", "bowtie", "file"}},
          {"graph", Type::Text},
          {"sites", Type::Int},
          {"mass", Type::Real},
          {"timeSteps", Type::Int},
          {"eps", Type::Real},
          {"slices", Type::Int},
          {"sliceSize", Type::Int},
          {"size", Type::Int},
          {"variant", Type::Text, false, {"subfamilyIntersection", "perObservable"}},
          {"pointComplements", Type::Bool},
          {"expectDiscrete", Type::Bool},
          {"minHypersurface", Type::Int}}},
        {Kind::Order, {{"fixture", Type::Text, false, {"f3"}}, {"boost", Type::Real}}},
    };
    return table.at(k);
}

constexpr const char* kEventPrefix = "event.";

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parseReal(std::string_view s) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<long long> parseInt(std::string_view s) {
    const std::string t = trim(s);
    long long v = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return v;
}

std::optional<bool> parseBool(std::string_view s) {
    const std::string t = trim(s);
    if (t == "true" || t == "yes" || t == "1") {
        return true;
    }
    if (t == "false" || t == "no" || t == "0") {
        return false;
    }
    return std::nullopt;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

std::optional<causal::Event> parseEvent(const std::string& id, std::string_view text) {
    causal::Event e;
    e.id = id;
    std::string_view coords = text;
    const auto bar = text.find('|');
    if (bar != std::string_view::npos) {
        const std::string group = trim(text.substr(bar + 1));
        if (group.empty()) {
            return std::nullopt;
        }
        e.group = group;
        coords = text.substr(0, bar);
    }
    const auto parts = split(coords, ',');
    if (parts.size() < 2) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto v = parseReal(parts[i]);
        if (!v) {
            return std::nullopt;
        }
        if (i == 0) {
            e.t = *v;
        } else {
            e.x.push_back(*v);
        }
    }
    return e;
}

bool typeMatches(const KeySpec& spec, const std::string& value) {
    switch (spec.type) {
        case Type::Real: return parseReal(value).has_value();
        case Type::Int: return parseInt(value).has_value();
        case Type::Bool: return parseBool(value).has_value();
        case Type::Axis: return parseAxis(value).has_value();
        case Type::Event: return parseEvent("id", value).has_value();
        case Type::Text:
            if (value.empty()) {
                return false;
            }
            return spec.choices.empty() ||
                   std::any_of(spec.choices.begin(), spec.choices.end(),
                               [&](const char* c) { return value == c; });
    }
    return false;
}

const char* typeName(Type t) {
    switch (t) {
        case Type::Real: return "a real number";
        case Type::Int: return "an integer";
        case Type::Bool: return "true or false";
        case Type::Axis: return "an axis";
        case Type::Text: return "a value";
        case Type::Event: return "an event 't, x... [| group]'";
    }
    return "a value";
}

// Typed accessors over a validated scenario.
class Params {
public:
    explicit Params(const Scenario& s) : s_(s) {}

    double real(const std::string& key, double fallback) const {
        return s_.has(key) ? *parseReal(s_.parameters.at(key)) : fallback;
    }
    std::optional<double> real(const std::string& key) const {
        return s_.has(key) ? parseReal(s_.parameters.at(key)) : std::nullopt;
    }
    long long integer(const std::string& key, long long fallback) const {
        return s_.has(key) ? *parseInt(s_.parameters.at(key)) : fallback;
    }
    bool flag(const std::string& key, bool fallback) const {
        return s_.has(key) ? *parseBool(s_.parameters.at(key)) : fallback;
    }
    std::optional<bool> flag(const std::string& key) const {
        return s_.has(key) ? parseBool(s_.parameters.at(key)) : std::nullopt;
    }
    quantum::Axis axis(const std::string& key) const {
        const auto a = *parseAxis(s_.parameters.at(key));
        return {a[0], a[1], a[2]};
    }
    std::string text(const std::string& key, const std::string& fallback) const {
        return s_.has(key) ? s_.parameters.at(key) : fallback;
    }

private:
    const Scenario& s_;
};

int positive(long long v, const char* what) {
    if (v <= 0 || v > 1'000'000'000) {
        throw ValidationError(std::string(what) + " must be a positive integer");
    }
    return static_cast<int>(v);
}

struct Context {
    const Scenario& scenario;
    Params p;
    fs::path outDir;
    std::uint64_t seed;
    unsigned threads;
    std::optional<double> eps;
    RunReport& report;

    void artifact(const fs::path& written) {
        report.artifacts.push_back(fs::relative(written, outDir).generic_string());
    }
};

bool closeTo(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void runBell(Context& c) {
    const auto axis = c.p.axis("axis");
    const auto axisB = c.scenario.has("axisB") ? c.p.axis("axisB") : axis;
    const int trials = positive(c.p.integer("trials", 1000), "trials");
    const int parties = static_cast<int>(c.p.integer("parties", 2));
    const double rate = entanglement::eprConsistency(axis, axisB, trials, c.seed);
    const double forced = entanglement::forcedAgreement(entanglement::ghz(parties), axis, 0);
    c.report.metrics["agreementRate"] = rate;
    c.report.metrics["forcedAgreement"] = forced;
    c.report.metrics["trials"] = trials;
    c.report.metrics["parties"] = parties;
    c.report.verdicts["perfectCorrelation"] = rate == 1.0;
}

void runChsh(Context& c) {
    const double grid = c.p.real("grid", 1.0);
    const double minValue = c.p.real("minValue", 2.827);
    const auto psi = entanglement::bellPhiPlus();
    const auto best = entanglement::maximizeChsh(psi, grid, c.threads);
    const double analytic =
        entanglement::chsh(psi, quantum::axisInXZ(0.0), quantum::axisInXZ(std::numbers::pi / 2),
                           quantum::axisInXZ(std::numbers::pi / 4),
                           quantum::axisInXZ(-std::numbers::pi / 4));
    const double tsirelson = 2.0 * std::numbers::sqrt2;
    c.report.metrics["quantumMax"] = best.value;
    c.report.metrics["analyticChsh"] = analytic;
    c.report.metrics["tsirelson"] = tsirelson;
    c.report.metrics["gridDegrees"] = grid;
    c.report.metrics["bestA0"] = best.angles.a0;
    c.report.metrics["bestA1"] = best.angles.a1;
    c.report.metrics["bestB0"] = best.angles.b0;
    c.report.metrics["bestB1"] = best.angles.b1;
    c.report.verdicts["gridOptimum"] = best.value >= minValue;
    c.report.verdicts["analytic"] = closeTo(analytic, tsirelson, 1e-10);
}

void runLhv(Context& c) {
    const double grid = c.p.real("grid", 1.0);
    const double minQuantum = c.p.real("minQuantum", 2.82);
    const auto lhv = entanglement::enumerateLhvStrategies();
    const auto best = entanglement::maximizeChsh(entanglement::bellPhiPlus(), grid, c.threads);
    c.report.metrics["lhvMax"] = lhv.max;
    c.report.metrics["lhvMin"] = lhv.min;
    c.report.metrics["strategies"] = static_cast<double>(lhv.strategiesVisited);
    c.report.metrics["quantumMax"] = best.value;
    c.report.verdicts["lhvBound"] = lhv.max == 2.0 && lhv.strategiesVisited == 16;
    c.report.verdicts["quantumExceeds"] = best.value >= minQuantum;
}

void runEpr(Context& c) {
    const auto a = c.p.axis("axisA");
    const auto b = c.p.axis("axisB");
    const int trials = positive(c.p.integer("trials", 10000), "trials");
    const double grid = c.p.real("grid", 5.0);
    if (!(grid > 0.0 && grid <= 90.0)) {
        throw ValidationError("grid must lie in (0, 90] degrees");
    }
    const auto psi = entanglement::bellPhiPlus();
    const auto p = entanglement::jointProbabilities(psi, {a, b}, 0, 1);
    const double expected = p[0][0] + p[1][1];
    const double rate = entanglement::eprConsistency(a, b, trials, c.seed);
    const double sigma = std::sqrt(expected * (1.0 - expected) / trials);
    const double tolerance = c.p.real("tolerance", 5.0 * sigma + 1e-12);
    const double shift = entanglement::marginalShift(psi, grid);
    c.report.metrics["agreementRate"] = rate;
    c.report.metrics["expectedAgreement"] = expected;
    c.report.metrics["trials"] = trials;
    c.report.metrics["maxMarginalShift"] = shift;
    c.report.verdicts["agreement"] = std::abs(rate - expected) <= tolerance;
    c.report.verdicts["noSignaling"] = shift <= 1e-10;
}

void runEraser(Context& c) {
    entanglement::EraserConfig cfg;
    cfg.marking = c.p.flag("marking", false);
    cfg.erasure = c.p.flag("erasure", false);
    cfg.phaseSamples = positive(c.p.integer("samples", 16), "samples");
    const double expected = c.p.real("expectVisibility", cfg.marking && !cfg.erasure ? 0.0 : 1.0);
    const auto fringe = entanglement::eraserFringe(cfg);
    const double v = entanglement::eraserVisibility(cfg);
    CsvTable t{{"phi", "probability"}, {}};
    for (const auto& f : fringe) {
        t.rows.push_back({f.phase, f.probability});
    }
    c.artifact(emitCsv(t, c.outDir / "fringe.csv"));
    c.report.metrics["visibility"] = v;
    c.report.metrics["expectedVisibility"] = expected;
    c.report.verdicts["visibility"] = closeTo(v, expected, 1e-12);
}

lattice::LatticeSpec latticeSpec(const Params& p, int sites, double mass, int steps) {
    lattice::LatticeSpec spec;
    const auto n = p.integer("sites", sites);
    const auto t = p.integer("timeSteps", steps);
    if (n < 8 || n > 4096 || t < 2 || t > 4096) {
        throw ValidationError("sites must lie in [8, 4096] and timeSteps in [2, 4096]");
    }
    spec.sites = static_cast<int>(n);
    spec.timeSteps = static_cast<int>(t);
    spec.mass = p.real("mass", mass);
    spec.timeStep = p.real("timeStep", 1.0);
    spec.validate();
    return spec;
}

void runCone(Context& c) {
    const auto spec = latticeSpec(c.p, 128, 0.1, 32);
    const double eps = c.eps.value_or(c.p.real("eps", lattice::kDefaultEps));
    const double speedTolerance = c.p.real("speedTolerance", 0.15);
    const auto field = lattice::CommutatorField::compute(spec, c.threads);
    const auto profile = lattice::coneProfile(field, eps);

    CsvTable table{{"dx", "dt", "D"}, {}};
    for (const auto& r : field.rows()) {
        table.rows.push_back({static_cast<double>(r.dx), r.dt, r.value});
    }
    c.artifact(emitCsv(table, c.outDir / "commutator.csv"));
    CsvTable cone{{"dt", "extent"}, {}};
    for (const auto& e : profile.perTimeExtent) {
        cone.rows.push_back({static_cast<double>(e.dt), static_cast<double>(e.extent)});
    }
    c.artifact(emitCsv(cone, c.outDir / "cone.csv"));

    double equalTime = 0.0;
    for (int dx = 0; dx < spec.sites; ++dx) {
        equalTime = std::max(equalTime, std::abs(field.at(dx, 0)));
    }
    int slices = 0;
    for (int t = 1; t < spec.timeSteps; ++t) {
        bool commutes = false;
        for (int x = 0; x < spec.sites && !commutes; ++x) {
            commutes = std::abs(field.at(-x, -t)) < eps;
        }
        slices += commutes ? 1 : 0;
    }
    const double excess = lattice::coneExcess(field, eps, profile.fittedSpeed, profile.intercept);
    c.report.metrics["fittedSpeed"] = profile.fittedSpeed;
    c.report.metrics["intercept"] = profile.intercept;
    c.report.metrics["eps"] = eps;
    c.report.metrics["coneExcess"] = excess;
    c.report.metrics["equalTimeMaxAbs"] = equalTime;
    c.report.metrics["commutingSlices"] = slices;
    c.report.metrics["maxExtent"] = profile.perTimeExtent.back().extent;
    c.report.verdicts["speed"] = std::abs(profile.fittedSpeed - 1.0) <= speedTolerance;
    c.report.verdicts["manySlices"] = slices >= 2;
    if (const auto w = c.p.real("broadening")) {
        c.report.verdicts["containment"] = excess <= *w + 1e-9;
    }
}

bool cliquesSound(const topology::CommutationGraph& g,
                  const std::vector<topology::VertexSet>& cliques) {
    for (const auto& k : cliques) {
        topology::VertexSet common(g.size());
        common.set();
        for (auto v : topology::members(k)) {
            if (!k.is_subset_of(g.neighbors(v))) {
                return false;
            }
            common &= g.neighbors(v);
        }
        if (common != k) {
            return false;  // some outside vertex commutes with all of k
        }
    }
    return true;
}

void runTopology(Context& c) {
    const std::string source = c.p.text("source", "");
    std::optional<topology::CommutationGraph> graph;
    std::optional<int> latticeSites;
    if (source == "lattice") {
        const auto spec = latticeSpec(c.p, 8, 1.0, 4);
        const double eps = c.eps.value_or(c.p.real("eps", lattice::kDefaultEps));
        auto lg = lattice::commutationGraph(spec, eps, c.threads);
        if (lg.warning) {
            c.report.warnings.push_back(*lg.warning);
        }
        graph.emplace(std::move(lg.graph));
        latticeSites = spec.sites;
    } else if (source == "chain") {
        graph = topology::fixtures::chain(positive(c.p.integer("slices", 5), "slices"),
                                          positive(c.p.integer("sliceSize", 3), "sliceSize"));
    } else if (source == "complete") {
        graph = topology::fixtures::complete(positive(c.p.integer("size", 4), "size"));
    } else if (source == "bowtie") {
        graph = topology::fixtures::bowtie();
    } else {
        if (!c.scenario.has("graph")) {
            throw ValidationError("source = file needs a graph key");
        }
        const fs::path path = c.scenario.baseDir / c.p.text("graph", "");
        std::ifstream in(path);
        if (!in) {
            throw ValidationError("cannot read graph file " + path.string());
        }
        std::ostringstream text;
        text << in.rdbuf();
        graph = topology::CommutationGraph::parseEdgeList(text.str());
    }
    const auto& g = *graph;
    const auto variant = c.p.text("variant", "subfamilyIntersection") == "perObservable"
                             ? topology::PointVariant::PerObservable
                             : topology::PointVariant::SubfamilyIntersection;
    const auto r = topology::topologyReport(g, c.p.flag("pointComplements", false), variant);
    c.artifact(emitJson(topology::toJson(r, g), c.outDir / "topology.json"));

    c.report.metrics["vertices"] = static_cast<double>(g.size());
    c.report.metrics["edges"] = static_cast<double>(g.edgeCount());
    c.report.metrics["cliqueCount"] = static_cast<double>(r.cliques.size());
    c.report.metrics["pointCount"] = static_cast<double>(r.points.size());
    c.report.metrics["perObservablePointCount"] = static_cast<double>(r.perObservablePoints.size());
    c.report.metrics["openSetCount"] = static_cast<double>(r.topology.openSetCount);
    c.report.metrics["sizeCapHit"] = r.topology.sizeCapHit ? 1 : 0;
    c.report.metrics["maxHypersurfaceSize"] = static_cast<double>(r.maxHypersurfaceSize);
    c.report.metrics["specializationChainLength"] = static_cast<double>(r.specializationChainLength);
    c.report.metrics["isT0"] = r.topology.flags.isT0 ? 1 : 0;
    c.report.metrics["isT1"] = r.topology.flags.isT1 ? 1 : 0;
    c.report.metrics["discrete"] = r.topology.flags.discrete ? 1 : 0;

    c.report.verdicts["cliquesSound"] = cliquesSound(g, r.cliques);
    c.report.verdicts["coverage"] = r.perObservablePoints.coversAllObservables();
    if (!r.topology.sizeCapHit) {
        c.report.verdicts["topologyClosed"] = topology::isClosedUnderUnionAndIntersection(r.topology);
    }
    if (g.size() <= 12 && r.cliques.size() <= 20 &&
        variant == topology::PointVariant::SubfamilyIntersection) {
        const auto bruteCliques = reference::bruteMaximalCliques(g);
        c.report.verdicts["pointsOracle"] =
            bruteCliques == r.cliques &&
            reference::bruteSubfamilyPoints(bruteCliques) == r.points.points;
    }
    if (source == "chain") {
        const bool singletons =
            std::all_of(r.hypersurfaces.begin(), r.hypersurfaces.end(),
                        [](const auto& h) { return h.size() == 1; });
        c.report.verdicts["singletonHypersurfaces"] = singletons && r.topology.flags.discrete;
    }
    if (latticeSites) {
        c.report.verdicts["hypersurfaceSpansSlice"] =
            r.maxHypersurfaceSize >= static_cast<std::size_t>(*latticeSites);
    }
    if (const auto d = c.p.flag("expectDiscrete")) {
        c.report.verdicts["discrete"] = r.topology.flags.discrete == *d;
    }
    if (c.scenario.has("minHypersurface")) {
        c.report.verdicts["minHypersurface"] =
            static_cast<long long>(r.maxHypersurfaceSize) >= c.p.integer("minHypersurface", 0);
    }
}

causal::EventSet scenarioEvents(const Scenario& s) {
    std::vector<causal::Event> events;
    for (const auto& [key, value] : s.parameters) {
        if (key.rfind(kEventPrefix, 0) == 0) {
            events.push_back(*parseEvent(key.substr(std::string_view(kEventPrefix).size()), value));
        }
    }
    if (s.has("fixture")) {
        if (!events.empty()) {
            throw ValidationError("use either fixture or event.* keys, not both");
        }
        return causal::fixtureF3();
    }
    if (events.empty()) {
        throw ValidationError("order scenario needs fixture = f3 or event.<id> keys");
    }
    return causal::EventSet(std::move(events));
}

void runOrder(Context& c) {
    const auto events = scenarioEvents(c.scenario);
    const auto classical = causal::classicalOrder(events);
    const auto summary = causal::enumerateAdmissibleOrientations(events, c.threads);

    bool extensionEverywhere = summary.admissibleCount > 0;
    json orientations = json::array();
    for (std::uint64_t idx = 0; idx < summary.orientationCount; ++idx) {
        const auto o = causal::orientationFromIndex(summary.freePairs, idx);
        json entry;
        entry["index"] = idx;
        entry["edges"] = json::array();
        for (const auto& [pair, edge] : o) {
            entry["edges"].push_back({events[edge.from].id, events[edge.to].id});
        }
        const auto result = causal::quantumOrder(events, o);
        if (const auto* order = std::get_if<causal::CausalOrder>(&result)) {
            entry["admissible"] = true;
            entry["order"] = causal::toJson(*order);
            extensionEverywhere =
                extensionEverywhere && causal::strictExtensionCheck(classical, *order).holds;
        } else {
            entry["admissible"] = false;
            entry["cycle"] = std::get<causal::CycleWitness>(result).cycle;
        }
        orientations.push_back(std::move(entry));
    }

    json pairs = json::array();
    std::size_t strengthened = 0;
    for (const auto& pr : summary.pairs) {
        pairs.push_back({{"a", events[pr.pair.first].id},
                         {"b", events[pr.pair.second].id},
                         {"classical", pr.classicallyOrdered},
                         {"comparable", causal::toString(pr.comparability)}});
        if (!pr.classicallyOrdered && pr.comparability == causal::Comparability::All) {
            ++strengthened;
        }
    }
    json doc;
    doc["classical"] = causal::toJson(classical);
    doc["orientations"] = std::move(orientations);
    doc["pairs"] = std::move(pairs);
    c.artifact(emitJson(doc, c.outDir / "order.json"));
    {
        const fs::path hasse = c.outDir / "classical_hasse.txt";
        std::ofstream out(hasse, std::ios::binary);
        out << causal::hasseText(classical);
        if (!out) {
            throw Error("cannot write " + hasse.string());
        }
        c.artifact(hasse);
    }

    c.report.metrics["events"] = static_cast<double>(events.size());
    c.report.metrics["freePairs"] = static_cast<double>(summary.freePairs.size());
    c.report.metrics["orientations"] = static_cast<double>(summary.orientationCount);
    c.report.metrics["admissible"] = static_cast<double>(summary.admissibleCount);
    c.report.metrics["strengthenedPairs"] = static_cast<double>(strengthened);
    c.report.metrics["classicalRelationSize"] = static_cast<double>(classical.relationSize());
    c.report.verdicts["strongerOrdering"] = summary.admissibleCount > 0 && summary.allPartialOrders &&
                                    summary.allContainClassical && strengthened > 0 &&
                                    extensionEverywhere;
    if (const auto beta = c.p.real("boost")) {
        const auto boosted = causal::classicalOrder(causal::boost(events, *beta));
        c.report.metrics["boost"] = *beta;
        c.report.verdicts["boostInvariant"] = boosted == classical;
    }
}

}  // namespace

const char* toString(Kind k) {
    switch (k) {
        case Kind::Bell: return "bell";
        case Kind::Chsh: return "chsh";
        case Kind::Lhv: return "lhv";
        case Kind::Epr: return "epr";
        case Kind::Eraser: return "eraser";
        case Kind::Cone: return "cone";
        case Kind::Topology: return "topology";
        case Kind::Order: return "order";
    }
    return "unknown";
}

std::optional<Kind> kindFromString(std::string_view name) {
    for (auto k : {Kind::Bell, Kind::Chsh, Kind::Lhv, Kind::Epr, Kind::Eraser, Kind::Cone,
                   Kind::Topology, Kind::Order}) {
        if (name == toString(k)) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<std::array<double, 3>> parseAxis(std::string_view text) {
    const std::string t = trim(text);
    static const std::map<std::string, std::array<double, 3>> named = {
        {"x", {1, 0, 0}},  {"y", {0, 1, 0}},  {"z", {0, 0, 1}},  {"+x", {1, 0, 0}},
        {"+y", {0, 1, 0}}, {"+z", {0, 0, 1}}, {"-x", {-1, 0, 0}}, {"-y", {0, -1, 0}},
        {"-z", {0, 0, -1}},
    };
    if (const auto it = named.find(t); it != named.end()) {
        return it->second;
    }
    if (t.rfind("xz(", 0) == 0 && t.size() > 4 && t.back() == ')') {
        const auto deg = parseReal(std::string_view(t).substr(3, t.size() - 4));
        if (!deg) {
            return std::nullopt;
        }
        const auto a = quantum::axisInXZ(*deg * std::numbers::pi / 180.0);
        return std::array<double, 3>{a[0], a[1], a[2]};
    }
    const auto parts = split(t, ',');
    if (parts.size() != 3) {
        return std::nullopt;
    }
    std::array<double, 3> v{};
    double norm2 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto c = parseReal(parts[i]);
        if (!c) {
            return std::nullopt;
        }
        v[i] = *c;
        norm2 += *c * *c;
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > quantum::kStructuralTol) {
        return std::nullopt;
    }
    return v;
}

Scenario parseScenario(std::string_view text) {
    std::map<std::string, std::string> raw;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("line " + std::to_string(lineNo) + ": expected key = value");
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) {
            throw ValidationError("line " + std::to_string(lineNo) + ": empty key");
        }
        if (!raw.emplace(key, value).second) {
            throw ValidationError("line " + std::to_string(lineNo) + ": duplicate key '" + key + "'");
        }
    }

    const auto kindIt = raw.find("kind");
    if (kindIt == raw.end()) {
        throw ValidationError("scenario has no kind");
    }
    const auto kind = kindFromString(kindIt->second);
    if (!kind) {
        throw ValidationError("unknown scenario kind '" + kindIt->second + "'");
    }
    raw.erase(kindIt);

    Scenario s;
    s.kind = *kind;
    std::map<std::string, const KeySpec*> allowed;
    for (const auto& k : commonKeys()) {
        allowed[k.name] = &k;
    }
    for (const auto& k : schema(*kind)) {
        allowed[k.name] = &k;
    }
    static const KeySpec eventSpec{"event", Type::Event};

    for (const auto& [key, value] : raw) {
        const KeySpec* spec = nullptr;
        if (const auto it = allowed.find(key); it != allowed.end()) {
            spec = it->second;
        } else if (*kind == Kind::Order && key.rfind(kEventPrefix, 0) == 0 &&
                   key.size() > std::string_view(kEventPrefix).size()) {
            spec = &eventSpec;
        }
        if (spec == nullptr) {
            throw ValidationError("unknown key '" + key + "' for kind " + toString(*kind));
        }
        if (!typeMatches(*spec, value)) {
            throw ValidationError("key '" + key + "' must be " + typeName(spec->type) +
                                  (spec->choices.empty() ? "" : " from the allowed set") +
                                  ", got '" + value + "'");
        }
        if (key == "seed") {
            const auto v = *parseInt(value);
            if (v < 0) {
                throw ValidationError("seed must be non-negative");
            }
            s.seed = static_cast<std::uint64_t>(v);
        } else if (key == "out") {
            s.outputPath = value;
        } else {
            s.parameters[key] = value;
        }
    }
    for (const auto& k : schema(*kind)) {
        if (k.required && !s.has(k.name)) {
            throw ValidationError(std::string("missing required key '") + k.name + "'");
        }
    }
    return s;
}

Scenario loadScenario(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read scenario " + file.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    Scenario s = parseScenario(text.str());
    s.baseDir = file.parent_path().empty() ? fs::path(".") : file.parent_path();
    return s;
}

bool RunReport::passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
}

json RunReport::toJson() const {
    json j;
    j["kind"] = toString(kind);
    j["inputs"] = inputs;
    j["seed"] = seed;
    j["metrics"] = metrics;
    json v = json::object();
    for (const auto& [name, ok] : verdicts) {
        v[name] = ok ? "pass" : "fail";
    }
    j["verdicts"] = std::move(v);
    j["artifacts"] = artifacts;
    j["warnings"] = warnings;
    j["passed"] = passed();
    return j;
}

RunReport runScenario(const Scenario& s, const RunOptions& options) {
    RunReport report;
    report.kind = s.kind;
    report.inputs = s.parameters;
    report.seed = options.seed.value_or(s.seed.value_or(kDefaultSeed));
    const fs::path outDir = options.outDir.value_or(
        s.outputPath ? s.baseDir / *s.outputPath : fs::path(kDefaultOutDir));
    Params params(s);
    const auto threads = options.threads.value_or(
        static_cast<unsigned>(std::clamp<long long>(params.integer("threads", 1), 1, 256)));

    try {
        fs::create_directories(outDir);
        Context c{s, params, outDir, report.seed, threads, options.eps, report};
        switch (s.kind) {
            case Kind::Bell: runBell(c); break;
            case Kind::Chsh: runChsh(c); break;
            case Kind::Lhv: runLhv(c); break;
            case Kind::Epr: runEpr(c); break;
            case Kind::Eraser: runEraser(c); break;
            case Kind::Cone: runCone(c); break;
            case Kind::Topology: runTopology(c); break;
            case Kind::Order: runOrder(c); break;
        }
        if (options.eps && (s.kind == Kind::Cone || s.kind == Kind::Topology)) {
            report.inputs["eps"] = formatNumber(*options.eps);
        }
        const fs::path written = emitJson(report.toJson(), outDir / "report.json");
        report.artifacts.push_back(fs::relative(written, outDir).generic_string());
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(toString(s.kind)) + " scenario: " + e.what());
    } catch (const ResourceError& e) {
        throw ResourceError(std::string(toString(s.kind)) + " scenario: " + e.what());
    } catch (const Error& e) {
        throw Error(std::string(toString(s.kind)) + " scenario: " + e.what());
    } catch (const fs::filesystem_error& e) {
        throw Error(std::string(toString(s.kind)) + " scenario: " + e.what());
    }
    return report;
}

int exitCode(const RunReport& report) { return report.passed() ? 0 : 2; }

std::string formatNumber(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw Error("number formatting failed");
    }
    return std::string(buf.data(), ptr);
}

fs::path emitCsv(const CsvTable& table, const fs::path& path) {
    std::string text;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        text += (i ? "," : "") + table.header[i];
    }
    text += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            text += (i ? "," : "") + formatNumber(row[i]);
        }
        text += '\n';
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return path;
}

fs::path emitJson(const json& value, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    out << value.dump(2) << '\n';
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return path;
}

}  // namespace qcausal::runner
