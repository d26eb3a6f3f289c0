#include "qcausal/entanglement/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <utility>

#include "qcausal/error.hpp"

namespace qcausal::entanglement {

using quantum::Complex;
using quantum::Matrix;
using quantum::Pvm;
using quantum::Vector;

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

void requireSites(const StateVector& psi, std::size_t siteA, std::size_t siteB) {
    const std::size_t n = siteCount(psi);
    if (siteA >= n || siteB >= n || siteA == siteB) {
        throw ValidationError("invalid site pair for a " + std::to_string(n) + "-site state");
    }
}

// Probability of the product event "site s gives branch b_s" for every listed site.
double productProbability(const StateVector& psi,
                          const std::vector<std::pair<std::size_t, const Matrix*>>& local) {
    const std::size_t n = siteCount(psi);
    Vector v = psi.amplitudes();
    for (const auto& [site, projector] : local) {
        Pvm single({{0.0, *projector}, {1.0, Matrix::Identity(2, 2) - *projector}});
        v = single.embedded(site, n)[0].projector * v;
    }
    return v.squaredNorm();
}

}  // namespace

StateVector bellPhiPlus() { return ghz(2); }

StateVector ghz(int n) {
    if (n < 2 || n > 20) {
        throw ValidationError("ghz: need 2 <= n <= 20 sites");
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    Vector v = Vector::Zero(dim);
    v(0) = 1.0 / std::sqrt(2.0);
    v(dim - 1) = 1.0 / std::sqrt(2.0);
    return StateVector::normalized(std::move(v));
}

std::size_t siteCount(const StateVector& psi) {
    const std::size_t dim = psi.dimension();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw ValidationError("state is not a register of spin-1/2 sites");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

std::array<std::array<double, 2>, 2> jointProbabilities(const StateVector& psi,
                                                        const CorrelationSetting& setting,
                                                        std::size_t siteA, std::size_t siteB) {
    requireSites(psi, siteA, siteB);
    const std::size_t n = siteCount(psi);
    const Pvm a = quantum::spinPvm(setting.axisA).embedded(siteA, n);
    const Pvm b = quantum::spinPvm(setting.axisB).embedded(siteB, n);
    std::array<std::array<double, 2>, 2> p{};
    for (std::size_t i = 0; i < 2; ++i) {
        const Vector partial = a[i].projector * psi.amplitudes();
        for (std::size_t j = 0; j < 2; ++j) {
            p[i][j] = (b[j].projector * partial).squaredNorm();
        }
    }
    return p;
}

double correlation(const StateVector& psi, const CorrelationSetting& setting, std::size_t siteA,
                   std::size_t siteB) {
    const auto p = jointProbabilities(psi, setting, siteA, siteB);
    const double e = p[0][0] - p[0][1] - p[1][0] + p[1][1];
    return std::clamp(e, -1.0, 1.0);
}

double chsh(const StateVector& psi, const Axis& a0, const Axis& a1, const Axis& b0,
            const Axis& b1) {
    if (siteCount(psi) != 2) {
        throw ValidationError("chsh expects a two-site state");
    }
    auto e = [&](const Axis& a, const Axis& b) { return correlation(psi, {a, b}, 0, 1); };
    return e(a0, b0) + e(a0, b1) + e(a1, b0) - e(a1, b1);
}

ChshOptimum maximizeChsh(const StateVector& psi, double gridDegrees, unsigned threads) {
    if (!(gridDegrees > 0.0) || gridDegrees > 5.0) {
        throw ValidationError("maximizeChsh: grid step must be in (0, 5] degrees");
    }
    if (siteCount(psi) != 2) {
        throw ValidationError("maximizeChsh expects a two-site state");
    }
    const auto count = static_cast<std::size_t>(std::floor(360.0 / gridDegrees + 1e-9));
    std::vector<Axis> axes;
    axes.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        axes.push_back(quantum::axisInXZ(static_cast<double>(k) * gridDegrees * kDegree));
    }

    std::vector<double> table(count * count);
    auto fillRows = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < count; ++j) {
                table[i * count + j] = correlation(psi, {axes[i], axes[j]}, 0, 1);
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (workers == 1) {
        fillRows(0, count);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (count + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin < end) {
                pool.emplace_back(fillRows, begin, end);
            }
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    ChshOptimum best;
    best.value = -std::numeric_limits<double>::infinity();
    best.anglesPerAxis = count;
    for (std::size_t a0 = 0; a0 < count; ++a0) {
        const double* row0 = &table[a0 * count];
        for (std::size_t a1 = 0; a1 < count; ++a1) {
            const double* row1 = &table[a1 * count];
            std::size_t b0 = 0;
            std::size_t b1 = 0;
            double sum = row0[0] + row1[0];
            double diff = row0[0] - row1[0];
            for (std::size_t b = 1; b < count; ++b) {
                if (row0[b] + row1[b] > sum) {
                    sum = row0[b] + row1[b];
                    b0 = b;
                }
                if (row0[b] - row1[b] > diff) {
                    diff = row0[b] - row1[b];
                    b1 = b;
                }
            }
            if (sum + diff > best.value) {
                best.value = sum + diff;
                best.angles = {static_cast<double>(a0) * gridDegrees,
                               static_cast<double>(a1) * gridDegrees,
                               static_cast<double>(b0) * gridDegrees,
                               static_cast<double>(b1) * gridDegrees};
            }
        }
    }
    return best;
}

double chshValue(const LhvStrategy& s) {
    auto e = [&](int x, int y) { return s.response(Side::A, x) * s.response(Side::B, y); };
    return e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1);
}

LhvSummary enumerateLhvStrategies() {
    LhvSummary out;
    out.max = -std::numeric_limits<double>::infinity();
    out.min = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < 16; ++mask) {
        LhvStrategy s;
        for (std::size_t k = 0; k < 4; ++k) {
            s.responses[k] = (mask >> k) & 1u ? -1 : 1;
        }
        const double v = chshValue(s);
        out.max = std::max(out.max, v);
        out.min = std::min(out.min, v);
        ++out.strategiesVisited;
    }
    return out;
}

double lhvMaxChsh() { return enumerateLhvStrategies().max; }

double eprConsistency(const Axis& axisA, const Axis& axisB, int trials, std::uint64_t seed) {
    if (trials < 1) {
        throw ValidationError("eprConsistency: trials must be >= 1");
    }
    const StateVector pair = bellPhiPlus();
    const Pvm first = quantum::spinPvm(axisA).embedded(0, 2);
    const Pvm second = quantum::spinPvm(axisB).embedded(1, 2);
    long agree = 0;
    for (int t = 0; t < trials; ++t) {
        const auto trial = static_cast<std::uint64_t>(t);
        const auto a = quantum::sampleOutcome(first, pair, quantum::mixSeed(seed, 2 * trial));
        const auto b = quantum::sampleOutcome(second, a.state, quantum::mixSeed(seed, 2 * trial + 1));
        if (first[a.branch].eigenvalue == second[b.branch].eigenvalue) {
            ++agree;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(trials);
}

double eprConsistency(const Axis& axis, int trials, std::uint64_t seed) {
    return eprConsistency(axis, axis, trials, seed);
}

double forcedAgreement(const StateVector& psi, const Axis& axis, std::size_t site) {
    const std::size_t n = siteCount(psi);
    if (site >= n) {
        throw ValidationError("site index out of range");
    }
    const Pvm local = quantum::spinPvm(axis);
    const Pvm measured = local.embedded(site, n);
    double worst = 1.0;
    for (std::size_t b = 0; b < measured.size(); ++b) {
        if (quantum::projectorProbability(measured[b].projector, psi) <= quantum::kNormTol) {
            continue;
        }
        const StateVector after = quantum::collapse(measured, b, psi);
        std::vector<std::pair<std::size_t, const Matrix*>> rest;
        for (std::size_t s = 0; s < n; ++s) {
            if (s != site) {
                rest.emplace_back(s, &local[b].projector);
            }
        }
        worst = std::min(worst, productProbability(after, rest));
    }
    return worst;
}

std::vector<FringePoint> eraserFringe(const EraserConfig& cfg) {
    if (cfg.phaseSamples < 8) {
        throw ValidationError("eraser: phaseSamples must be >= 8");
    }
    if (cfg.erasure && !cfg.marking) {
        throw ValidationError("eraser: erasure requested without which-path marking");
    }
    const Pvm pathX = quantum::spinPvm(Axis(1, 0, 0)).embedded(0, 2);
    const Pvm markerX = quantum::spinPvm(Axis(1, 0, 0)).embedded(1, 2);
    // Controlled flip: path |d⟩ toggles the marker (basis uu, ud, du, dd).
    Matrix cnot = Matrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = 1.0;
    cnot(2, 3) = cnot(3, 2) = 1.0;
    const quantum::UnitaryOp mark(cnot);

    std::vector<FringePoint> curve;
    curve.reserve(static_cast<std::size_t>(cfg.phaseSamples));
    for (int k = 0; k < cfg.phaseSamples; ++k) {
        const double phi = std::numbers::pi * k / (cfg.phaseSamples - 1);
        Vector path(2);
        path << 1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), phi);
        StateVector psi = quantum::tensor(StateVector(path), StateVector::up());
        if (cfg.marking) {
            psi = quantum::applyUnitary(mark, psi);
        }
        if (cfg.erasure) {
            // Post-select on the marker reading + in the x basis.
            psi = quantum::collapse(markerX, 0, psi);
        }
        curve.push_back({phi, quantum::measureProbabilities(pathX, psi).outcomes[0].probability});
    }
    return curve;
}

double eraserVisibility(const EraserConfig& cfg) {
    const auto curve = eraserFringe(cfg);
    const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end(), [](const auto& a, const auto& b) {
        return a.probability < b.probability;
    });
    const double sum = hi->probability + lo->probability;
    return sum > 0.0 ? (hi->probability - lo->probability) / sum : 0.0;
}

double marginalShift(const StateVector& psi, double gridDegrees) {
    const int steps = static_cast<int>(std::floor(360.0 / gridDegrees + 1e-9));
    double worst = 0.0;
    for (int i = 0; i < steps; ++i) {
        const auto fixed = quantum::axisInXZ(i * gridDegrees * std::numbers::pi / 180.0);
        double lo[2] = {1.0, 1.0};
        double hi[2] = {0.0, 0.0};
        for (int j = 0; j < steps; ++j) {
            const auto other = quantum::axisInXZ(j * gridDegrees * std::numbers::pi / 180.0);
            const auto pa = jointProbabilities(psi, {fixed, other}, 0, 1);
            const auto pb = jointProbabilities(psi, {other, fixed}, 0, 1);
            const double ma = pa[0][0] + pa[0][1];
            const double mb = pb[0][0] + pb[1][0];
            lo[0] = std::min(lo[0], ma);
            hi[0] = std::max(hi[0], ma);
            lo[1] = std::min(lo[1], mb);
            hi[1] = std::max(hi[1], mb);
        }
        worst = std::max({worst, hi[0] - lo[0], hi[1] - lo[1]});
    }
    return worst;
}

}  // namespace qcausal::entanglement
