#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace qcausal::topology {

using VertexSet = boost::dynamic_bitset<>;

/// Ascending member indices of a bit set.
std::vector<std::size_t> members(const VertexSet& s);

/// Lexicographic order on ascending member lists; the canonical ordering
/// for every family of sets the library emits.
bool memberwiseLess(const VertexSet& a, const VertexSet& b);

/// Finite, symmetric, reflexive "commutes with" relation over labelled
/// observables. Every vertex commutes with itself.
class CommutationGraph {
public:
    explicit CommutationGraph(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    std::optional<std::size_t> indexOf(std::string_view label) const;

    void connect(std::size_t a, std::size_t b);
    bool commutes(std::size_t a, std::size_t b) const { return adj_[a].test(b); }

    // Closed neighbourhood: includes the vertex itself.
    const VertexSet& neighbors(std::size_t v) const { return adj_[v]; }

    // Unordered pairs {a, b} with a != b.
    std::size_t edgeCount() const;
    bool isComplete() const;
    bool isEdgeless() const { return edgeCount() == 0; }

    /// Parses "a b" lines (commuting pair) and "a" lines (isolated
    /// observable); '#' starts a comment and blank lines are skipped.
    /// Labels are sorted so the vertex order does not depend on line order.
    static CommutationGraph parseEdgeList(std::string_view text);
    std::string toEdgeList() const;

private:
    std::vector<std::string> labels_;
    std::vector<VertexSet> adj_;
};

}  // namespace qcausal::topology
