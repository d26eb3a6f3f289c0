#include "qcausal/topology/fixtures.hpp"

#include <string>
#include <vector>

namespace qcausal::topology::fixtures {

CommutationGraph complete(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("o" + std::to_string(i));
    }
    CommutationGraph g(std::move(labels));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            g.connect(a, b);
        }
    }
    return g;
}

CommutationGraph chain(std::size_t slices, std::size_t sliceSize) {
    std::vector<std::string> labels;
    for (std::size_t t = 0; t < slices; ++t) {
        for (std::size_t j = 0; j < sliceSize; ++j) {
            labels.push_back("t" + std::to_string(t) + "o" + std::to_string(j));
        }
    }
    CommutationGraph g(std::move(labels));
    for (std::size_t t = 0; t < slices; ++t) {
        const std::size_t base = t * sliceSize;
        for (std::size_t a = 0; a < sliceSize; ++a) {
            for (std::size_t b = a + 1; b < sliceSize; ++b) {
                g.connect(base + a, base + b);
            }
        }
    }
    return g;
}

CommutationGraph bowtie() {
    return CommutationGraph::parseEdgeList("a b\na v\nb v\nc d\nc v\nd v\n");
}

CommutationGraph twoTriangles() {
    return CommutationGraph::parseEdgeList("a b\na c\nb c\nd e\nd f\ne f\n");
}

}  // namespace qcausal::topology::fixtures
