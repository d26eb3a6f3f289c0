#include "qcausal/causal/order.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "qcausal/error.hpp"

namespace qcausal::causal {

namespace {

bool lightConePrecedes(const Event& e, const Event& f) {
    const double dt = f.t - e.t;
    if (!(dt > 0.0)) {
        return false;
    }
    double dx2 = 0.0;
    for (std::size_t k = 0; k < e.x.size(); ++k) {
        const double d = f.x[k] - e.x[k];
        dx2 += d * d;
    }
    return dt * dt - dx2 >= -kIntervalTol;
}

// Indices sorted by id, used for every emitted listing.
std::vector<std::size_t> byId(const std::vector<std::string>& ids) {
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ids[a] < ids[b]; });
    return order;
}

// Shortest path a -> b over the generating edges (BFS), inclusive of both ends.
std::vector<std::size_t> path(const std::vector<std::vector<std::size_t>>& out, std::size_t a,
                              std::size_t b) {
    std::vector<std::size_t> parent(out.size(), out.size());
    std::deque<std::size_t> queue{a};
    parent[a] = a;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        if (v == b) {
            break;
        }
        for (auto w : out[v]) {
            if (parent[w] == out.size()) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    std::vector<std::size_t> p{b};
    while (p.back() != a) {
        p.push_back(parent[p.back()]);
    }
    std::reverse(p.begin(), p.end());
    return p;
}

}  // namespace

EventSet::EventSet(std::vector<Event> events) : events_(std::move(events)) {
    std::set<std::string> seen;
    for (const auto& e : events_) {
        if (e.id.empty()) {
            throw ValidationError("event ids must be non-empty");
        }
        if (!seen.insert(e.id).second) {
            throw ValidationError("duplicate event id '" + e.id + "'");
        }
        if (e.x.size() != events_.front().x.size()) {
            throw ValidationError("event '" + e.id + "' has a different spatial dimension");
        }
        if (!std::isfinite(e.t) ||
            !std::all_of(e.x.begin(), e.x.end(), [](double v) { return std::isfinite(v); })) {
            throw ValidationError("event '" + e.id + "' has non-finite coordinates");
        }
        if (e.group && e.group->empty()) {
            throw ValidationError("event '" + e.id + "' has an empty group name");
        }
    }
}

std::vector<std::string> EventSet::ids() const {
    std::vector<std::string> out;
    out.reserve(events_.size());
    for (const auto& e : events_) {
        out.push_back(e.id);
    }
    return out;
}

std::optional<std::size_t> EventSet::indexOf(const std::string& id) const {
    for (std::size_t i = 0; i < events_.size(); ++i) {
        if (events_[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

bool EventSet::sameGroup(std::size_t a, std::size_t b) const {
    return a != b && events_[a].group && events_[b].group && *events_[a].group == *events_[b].group;
}

EventSet fixtureF3() {
    return EventSet({
        {"e1", 1.0, {-0.99}, "pair"},
        {"e2", 1.0, {0.99}, "pair"},
        {"e3", 1.5, {1.2}, "pair"},
    });
}

EventSet boost(const EventSet& events, double beta) {
    if (!(std::abs(beta) < 1.0)) {
        throw ValidationError("boost velocity must satisfy |beta| < 1");
    }
    const double gamma = 1.0 / std::sqrt(1.0 - beta * beta);
    std::vector<Event> out = events.events();
    for (auto& e : out) {
        if (e.x.empty()) {
            throw ValidationError("boost needs at least one spatial dimension");
        }
        const double t = e.t;
        const double x = e.x[0];
        e.t = gamma * (t - beta * x);
        e.x[0] = gamma * (x - beta * t);
    }
    return EventSet(std::move(out));
}

CausalOrder::CausalOrder(std::vector<std::string> ids) : ids_(std::move(ids)) {
    rows_.assign(ids_.size(), boost::dynamic_bitset<>(ids_.size()));
}

void CausalOrder::close() {
    for (std::size_t k = 0; k < size(); ++k) {
        for (std::size_t i = 0; i < size(); ++i) {
            if (rows_[i].test(k)) {
                rows_[i] |= rows_[k];
            }
        }
    }
}

bool CausalOrder::isIrreflexive() const {
    for (std::size_t i = 0; i < size(); ++i) {
        if (rows_[i].test(i)) {
            return false;
        }
    }
    return true;
}

bool CausalOrder::isTransitive() const {
    for (std::size_t a = 0; a < size(); ++a) {
        for (std::size_t b = 0; b < size(); ++b) {
            if (rows_[a].test(b) && !rows_[b].is_subset_of(rows_[a])) {
                return false;
            }
        }
    }
    return true;
}

bool CausalOrder::isAntisymmetric() const {
    for (std::size_t a = 0; a < size(); ++a) {
        for (std::size_t b = a + 1; b < size(); ++b) {
            if (rows_[a].test(b) && rows_[b].test(a)) {
                return false;
            }
        }
    }
    return true;
}

bool CausalOrder::contains(const CausalOrder& other) const {
    if (other.size() != size()) {
        return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (!other.rows_[i].is_subset_of(rows_[i])) {
            return false;
        }
    }
    return true;
}

std::size_t CausalOrder::relationSize() const {
    std::size_t n = 0;
    for (const auto& r : rows_) {
        n += r.count();
    }
    return n;
}

std::vector<std::pair<std::size_t, std::size_t>> CausalOrder::hasseEdges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto order = byId(ids_);
    for (auto a : order) {
        for (auto b : order) {
            if (!precedes(a, b)) {
                continue;
            }
            bool covered = true;
            for (std::size_t c = 0; c < size() && covered; ++c) {
                covered = !(precedes(a, c) && precedes(c, b));
            }
            if (covered) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

CausalOrder classicalOrder(const EventSet& events) {
    CausalOrder order(events.ids());
    for (std::size_t a = 0; a < events.size(); ++a) {
        for (std::size_t b = 0; b < events.size(); ++b) {
            if (lightConePrecedes(events[a], events[b])) {
                order.add(a, b);
            }
        }
    }
    return order;
}

std::vector<EventPair> freePairs(const EventSet& events) {
    const auto classical = classicalOrder(events);
    std::vector<EventPair> out;
    for (std::size_t a = 0; a < events.size(); ++a) {
        for (std::size_t b = a + 1; b < events.size(); ++b) {
            if (events.sameGroup(a, b) && !classical.comparable(a, b)) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

Orientation orientationFromIndex(const std::vector<EventPair>& free, std::uint64_t index) {
    Orientation o;
    for (std::size_t k = 0; k < free.size(); ++k) {
        const auto [a, b] = free[k];
        o[free[k]] = ((index >> k) & 1U) ? DirectedEdge{b, a} : DirectedEdge{a, b};
    }
    return o;
}

std::vector<DirectedEdge> enforcementEdges(const EventSet& events, const Orientation& orientation) {
    const auto classical = classicalOrder(events);
    for (const auto& [pair, edge] : orientation) {
        const auto [a, b] = pair;
        if (a >= b || b >= events.size() || !events.sameGroup(a, b)) {
            throw ValidationError("orientation names a pair outside any entanglement group");
        }
        const bool matches = (edge.from == a && edge.to == b) || (edge.from == b && edge.to == a);
        if (!matches) {
            throw ValidationError("orientation edge does not join its pair");
        }
        if (classical.precedes(edge.to, edge.from)) {
            throw ValidationError("orientation contradicts the classical order between '" +
                                  events[edge.from].id + "' and '" + events[edge.to].id + "'");
        }
    }
    std::vector<DirectedEdge> edges;
    for (std::size_t a = 0; a < events.size(); ++a) {
        for (std::size_t b = a + 1; b < events.size(); ++b) {
            if (!events.sameGroup(a, b)) {
                continue;
            }
            if (classical.precedes(a, b)) {
                edges.push_back({a, b});
            } else if (classical.precedes(b, a)) {
                edges.push_back({b, a});
            } else {
                const auto it = orientation.find({a, b});
                if (it == orientation.end()) {
                    throw ValidationError("orientation is missing the pair ('" + events[a].id +
                                          "', '" + events[b].id + "')");
                }
                edges.push_back(it->second);
            }
        }
    }
    return edges;
}

std::variant<CausalOrder, CycleWitness> quantumOrder(const EventSet& events,
                                                    const Orientation& orientation) {
    const auto classical = classicalOrder(events);
    const auto edges = enforcementEdges(events, orientation);
    CausalOrder order = classical;
    std::vector<std::vector<std::size_t>> out(events.size());
    for (std::size_t a = 0; a < events.size(); ++a) {
        for (std::size_t b = 0; b < events.size(); ++b) {
            if (classical.precedes(a, b)) {
                out[a].push_back(b);
            }
        }
    }
    for (const auto& e : edges) {
        order.add(e.from, e.to);
        out[e.from].push_back(e.to);
    }
    order.close();
    for (std::size_t a = 0; a < events.size(); ++a) {
        for (std::size_t b = a + 1; b < events.size(); ++b) {
            if (order.precedes(a, b) && order.precedes(b, a)) {
                auto forward = path(out, a, b);
                const auto back = path(out, b, a);
                forward.insert(forward.end(), back.begin() + 1, back.end());
                CycleWitness w;
                for (auto i : forward) {
                    w.cycle.push_back(events[i].id);
                }
                return w;
            }
        }
    }
    return order;
}

const char* toString(Comparability c) {
    switch (c) {
        case Comparability::All: return "all";
        case Comparability::Some: return "some";
        case Comparability::None: return "none";
    }
    return "none";
}

OrientationSummary enumerateAdmissibleOrientations(const EventSet& events, unsigned threads) {
    OrientationSummary s;
    s.freePairs = freePairs(events);
    if (s.freePairs.size() > kMaxFreePairs) {
        throw ResourceError("too many free pairs to enumerate: " +
                            std::to_string(s.freePairs.size()) + " > " +
                            std::to_string(kMaxFreePairs));
    }
    s.orientationCount = std::uint64_t{1} << s.freePairs.size();
    const auto classical = classicalOrder(events);
    const std::size_t n = events.size();

    struct Chunk {
        std::vector<std::uint64_t> admissible;
        std::vector<std::uint64_t> comparableCount;
        bool partial = true;
        bool contains = true;
    };
    auto run = [&](std::uint64_t begin, std::uint64_t end, Chunk& c) {
        c.comparableCount.assign(n * n, 0);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            const auto result = quantumOrder(events, orientationFromIndex(s.freePairs, idx));
            const auto* order = std::get_if<CausalOrder>(&result);
            if (order == nullptr) {
                continue;
            }
            c.admissible.push_back(idx);
            c.partial = c.partial && order->isPartialOrder();
            c.contains = c.contains && order->contains(classical);
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    c.comparableCount[a * n + b] += order->comparable(a, b) ? 1 : 0;
                }
            }
        }
    };

    const std::uint64_t workers =
        std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(1, s.orientationCount));
    std::vector<Chunk> chunks(workers);
    const std::uint64_t step = (s.orientationCount + workers - 1) / workers;
    if (workers == 1) {
        run(0, s.orientationCount, chunks[0]);
    } else {
        std::vector<std::thread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const auto begin = std::min(s.orientationCount, w * step);
            const auto end = std::min(s.orientationCount, begin + step);
            pool.emplace_back(run, begin, end, std::ref(chunks[w]));
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    std::vector<std::uint64_t> comparable(n * n, 0);
    for (const auto& c : chunks) {
        s.admissibleIndices.insert(s.admissibleIndices.end(), c.admissible.begin(),
                                   c.admissible.end());
        s.allPartialOrders = s.allPartialOrders && c.partial;
        s.allContainClassical = s.allContainClassical && c.contains;
        for (std::size_t k = 0; k < c.comparableCount.size(); ++k) {
            comparable[k] += c.comparableCount[k];
        }
    }
    s.admissibleCount = s.admissibleIndices.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            PairReport r;
            r.pair = {a, b};
            r.classicallyOrdered = classical.comparable(a, b);
            const auto count = comparable[a * n + b];
            if (s.admissibleCount > 0 && count == s.admissibleCount) {
                r.comparability = Comparability::All;
            } else if (count > 0) {
                r.comparability = Comparability::Some;
            }
            s.pairs.push_back(r);
        }
    }
    return s;
}

ExtensionVerdict strictExtensionCheck(const CausalOrder& classical, const CausalOrder& quantum) {
    if (classical.ids() != quantum.ids()) {
        throw ValidationError("orders are over different event sets");
    }
    ExtensionVerdict v;
    const auto order = byId(classical.ids());
    for (auto a : order) {
        for (auto b : order) {
            if (classical.precedes(a, b) && !quantum.precedes(a, b) && !v.violation) {
                v.violation = EventPair{a, b};
            }
            if (quantum.precedes(a, b) && !classical.precedes(a, b) && !v.witness) {
                v.witness = EventPair{a, b};
            }
        }
    }
    v.holds = !v.violation && v.witness.has_value();
    return v;
}

std::vector<Orientation> earliestFirstOrientations(const EventSet& events) {
    const auto free = freePairs(events);
    Orientation fixed;
    std::vector<EventPair> ties;
    for (const auto& p : free) {
        const auto [a, b] = p;
        if (events[a].t < events[b].t) {
            fixed[p] = {a, b};
        } else if (events[b].t < events[a].t) {
            fixed[p] = {b, a};
        } else {
            ties.push_back(p);
        }
    }
    if (ties.size() > kMaxFreePairs) {
        throw ResourceError("too many simultaneous free pairs to branch over");
    }
    std::vector<Orientation> out;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << ties.size()); ++idx) {
        Orientation o = fixed;
        for (const auto& [pair, edge] : orientationFromIndex(ties, idx)) {
            o[pair] = edge;
        }
        out.push_back(std::move(o));
    }
    return out;
}

nlohmann::json toJson(const CausalOrder& order) {
    const auto& ids = order.ids();
    const auto sorted = byId(ids);
    nlohmann::json j;
    j["events"] = nlohmann::json::array();
    j["relation"] = nlohmann::json::object();
    for (auto a : sorted) {
        j["events"].push_back(ids[a]);
        auto succ = nlohmann::json::array();
        for (auto b : sorted) {
            if (order.precedes(a, b)) {
                succ.push_back(ids[b]);
            }
        }
        j["relation"][ids[a]] = std::move(succ);
    }
    j["hasse"] = nlohmann::json::array();
    for (const auto& [a, b] : order.hasseEdges()) {
        j["hasse"].push_back({ids[a], ids[b]});
    }
    return j;
}

std::string hasseText(const CausalOrder& order) {
    std::ostringstream out;
    for (const auto& [a, b] : order.hasseEdges()) {
        out << order.ids()[a] << " -> " << order.ids()[b] << '\n';
    }
    return out.str();
}

}  // namespace qcausal::causal
