#include "qcausal/topology/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "qcausal/error.hpp"

namespace qcausal::topology {

std::vector<std::size_t> members(const VertexSet& s) {
    std::vector<std::size_t> out;
    out.reserve(s.count());
    for (auto i = s.find_first(); i != VertexSet::npos; i = s.find_next(i)) {
        out.push_back(i);
    }
    return out;
}

bool memberwiseLess(const VertexSet& a, const VertexSet& b) {
    auto i = a.find_first();
    auto j = b.find_first();
    while (i != VertexSet::npos && j != VertexSet::npos) {
        if (i != j) {
            return i < j;
        }
        i = a.find_next(i);
        j = b.find_next(j);
    }
    return i == VertexSet::npos && j != VertexSet::npos;
}

CommutationGraph::CommutationGraph(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
        throw ValidationError("commutation graph needs at least one observable");
    }
    std::set<std::string_view> seen;
    for (const auto& l : labels_) {
        if (l.empty() || !seen.insert(l).second) {
            throw ValidationError("observable labels must be non-empty and unique: '" + l + "'");
        }
    }
    adj_.assign(labels_.size(), VertexSet(labels_.size()));
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        adj_[i].set(i);
    }
}

std::optional<std::size_t> CommutationGraph::indexOf(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) {
            return i;
        }
    }
    return std::nullopt;
}

void CommutationGraph::connect(std::size_t a, std::size_t b) {
    if (a >= size() || b >= size()) {
        throw ValidationError("vertex index out of range");
    }
    adj_[a].set(b);
    adj_[b].set(a);
}

std::size_t CommutationGraph::edgeCount() const {
    std::size_t degreeSum = 0;
    for (const auto& row : adj_) {
        degreeSum += row.count() - 1;
    }
    return degreeSum / 2;
}

bool CommutationGraph::isComplete() const {
    return std::all_of(adj_.begin(), adj_.end(), [](const VertexSet& row) { return row.all(); });
}

CommutationGraph CommutationGraph::parseEdgeList(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::set<std::string> names;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::istringstream fields(line.substr(0, line.find('#')));
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) {
            tok.push_back(t);
        }
        if (tok.empty()) {
            continue;
        }
        if (tok.size() > 2) {
            throw ValidationError("edge list line " + std::to_string(lineNo) +
                                  ": expected one or two labels");
        }
        names.insert(tok[0]);
        if (tok.size() == 2) {
            names.insert(tok[1]);
            pairs.emplace_back(tok[0], tok[1]);
        }
    }
    if (names.empty()) {
        throw ValidationError("edge list declares no observables");
    }
    CommutationGraph g(std::vector<std::string>(names.begin(), names.end()));
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < g.size(); ++i) {
        index.emplace(g.label(i), i);
    }
    for (const auto& [a, b] : pairs) {
        g.connect(index.at(a), index.at(b));
    }
    return g;
}

std::string CommutationGraph::toEdgeList() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (adj_[i].count() == 1) {
            out << labels_[i] << '\n';
        }
        for (std::size_t j = i + 1; j < size(); ++j) {
            if (adj_[i].test(j)) {
                out << labels_[i] << ' ' << labels_[j] << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace qcausal::topology
