#pragma once

// Classical light-cone order over measurement events and the quantum order
// obtained by adding enforcement edges between entangled measurements.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "json.hpp"

namespace qcausal::causal {

// Slack on the interval test so that boosted lightlike pairs stay ordered.
inline constexpr double kIntervalTol = 1e-9;
inline constexpr std::size_t kMaxFreePairs = 20;

struct Event {
    std::string id;
    double t = 0.0;
    std::vector<double> x;
    std::optional<std::string> group;
};

class EventSet {
public:
    /// Throws ValidationError on empty or duplicate ids, mixed spatial
    /// dimensions or non-finite coordinates.
    explicit EventSet(std::vector<Event> events);

    std::size_t size() const { return events_.size(); }
    const Event& operator[](std::size_t i) const { return events_[i]; }
    const std::vector<Event>& events() const { return events_; }
    std::vector<std::string> ids() const;
    std::optional<std::size_t> indexOf(const std::string& id) const;
    bool sameGroup(std::size_t a, std::size_t b) const;

private:
    std::vector<Event> events_;
};

/// The F3 fixture: one three-particle group where e2 ≺ e3 and e1 is
/// spacelike to both.
EventSet fixtureF3();

/// 1+1D boost along the first spatial axis: t' = γ(t − βx), x' = γ(x − βt).
EventSet boost(const EventSet& events, double beta);

/// Strict order stored as a reachability matrix; row i holds the successors of i.
class CausalOrder {
public:
    explicit CausalOrder(std::vector<std::string> ids);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }

    bool precedes(std::size_t a, std::size_t b) const { return rows_[a].test(b); }
    bool comparable(std::size_t a, std::size_t b) const { return precedes(a, b) || precedes(b, a); }
    void add(std::size_t a, std::size_t b) { rows_[a].set(b); }
    void close();  // Warshall transitive closure

    bool isIrreflexive() const;
    bool isTransitive() const;
    bool isAntisymmetric() const;
    bool isPartialOrder() const { return isIrreflexive() && isTransitive() && isAntisymmetric(); }

    /// Every pair ordered in `other` is ordered the same way here.
    bool contains(const CausalOrder& other) const;
    std::size_t relationSize() const;

    /// Covering pairs (a ≺ b with nothing strictly between), sorted by id.
    std::vector<std::pair<std::size_t, std::size_t>> hasseEdges() const;

    bool operator==(const CausalOrder& other) const = default;

private:
    std::vector<std::string> ids_;
    std::vector<boost::dynamic_bitset<>> rows_;
};

CausalOrder classicalOrder(const EventSet& events);

/// Unordered pair (i < j) of event indices.
using EventPair = std::pair<std::size_t, std::size_t>;

struct DirectedEdge {
    std::size_t from;
    std::size_t to;
    bool operator==(const DirectedEdge&) const = default;
};

/// Direction chosen for each same-group pair, keyed by (min, max) index.
using Orientation = std::map<EventPair, DirectedEdge>;

/// Same-group pairs not ordered classically, in lexicographic index order.
std::vector<EventPair> freePairs(const EventSet& events);

/// Bit k of `index` set orients free pair k from its larger index to its smaller.
Orientation orientationFromIndex(const std::vector<EventPair>& free, std::uint64_t index);

/// One edge per same-group pair. Throws ValidationError when the orientation
/// misses a free pair, names a pair outside a group, or contradicts the
/// classical direction.
std::vector<DirectedEdge> enforcementEdges(const EventSet& events, const Orientation& orientation);

struct CycleWitness {
    std::vector<std::string> cycle;  // e.g. {e1, e2, e3, e1}
};

std::variant<CausalOrder, CycleWitness> quantumOrder(const EventSet& events,
                                                    const Orientation& orientation);

enum class Comparability { All, Some, None };
const char* toString(Comparability c);

struct PairReport {
    EventPair pair;
    bool classicallyOrdered = false;
    Comparability comparability = Comparability::None;
};

struct OrientationSummary {
    std::vector<EventPair> freePairs;
    std::uint64_t orientationCount = 0;
    std::uint64_t admissibleCount = 0;
    std::vector<std::uint64_t> admissibleIndices;
    // Over admissible orientations only.
    bool allPartialOrders = true;
    bool allContainClassical = true;
    std::vector<PairReport> pairs;  // every unordered pair, lexicographic
};

/// Throws ResourceError above kMaxFreePairs free pairs.
OrientationSummary enumerateAdmissibleOrientations(const EventSet& events, unsigned threads = 1);

struct ExtensionVerdict {
    bool holds = false;
    std::optional<EventPair> witness;    // ordered in quantum, not classically
    std::optional<EventPair> violation;  // classical pair missing from quantum
};

/// Throws ValidationError when the two orders are over different events.
ExtensionVerdict strictExtensionCheck(const CausalOrder& classical, const CausalOrder& quantum);

/// Orient every free pair from the earlier coordinate time; equal times are
/// left open and branched over, so one orientation per tie combination.
std::vector<Orientation> earliestFirstOrientations(const EventSet& events);

/// {"events": [...], "relation": {id: [successors]}, "hasse": [[a, b], ...]}, ids sorted.
nlohmann::json toJson(const CausalOrder& order);

/// "a -> b" per covering pair.
std::string hasseText(const CausalOrder& order);

}  // namespace qcausal::causal
