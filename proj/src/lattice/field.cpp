#include "qcausal/lattice/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "qcausal/error.hpp"

namespace qcausal::lattice {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long wrap(long value, long modulus) {
    const long r = value % modulus;
    return r < 0 ? r + modulus : r;
}

std::vector<double> frequencies(const LatticeSpec& spec) {
    std::vector<double> w(static_cast<std::size_t>(spec.sites));
    for (int n = 0; n < spec.sites; ++n) {
        w[static_cast<std::size_t>(n)] = dispersion(spec, n);
    }
    return w;
}

double modeSum(const LatticeSpec& spec, const std::vector<double>& omega, long dx, double dt) {
    const long n = spec.sites;
    const long x = wrap(dx, n);
    double sum = 0.0;
    for (long k = 0; k < n; ++k) {
        // k_n·dx reduced exactly through the integer phase index.
        const double phase = kTwoPi * static_cast<double>((k * x) % n) / static_cast<double>(n);
        const double w = omega[static_cast<std::size_t>(k)];
        sum += std::sin(phase - w * dt) / w;
    }
    return sum / static_cast<double>(n);
}

void requireEps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw ValidationError("commutation threshold eps must be positive");
    }
}

}  // namespace

void LatticeSpec::validate() const {
    if (sites < 8) {
        throw ValidationError("lattice needs at least 8 sites");
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw ValidationError("lattice mass must be strictly positive");
    }
    if (timeSteps < 2) {
        throw ValidationError("lattice needs at least 2 time steps");
    }
    if (!(timeStep > 0.0) || !std::isfinite(timeStep)) {
        throw ValidationError("lattice time step must be positive");
    }
}

double dispersion(const LatticeSpec& spec, int modeIndex) {
    if (modeIndex < 0 || modeIndex >= spec.sites) {
        throw ValidationError("mode index out of range");
    }
    const double s = std::sin(std::numbers::pi * modeIndex / spec.sites);
    return std::sqrt(spec.mass * spec.mass + 4.0 * s * s);
}

double pauliJordan(const LatticeSpec& spec, long dx, double dt) {
    spec.validate();
    return modeSum(spec, frequencies(spec), dx, dt);
}

double canonicalCheck(const LatticeSpec& spec, long dx) {
    spec.validate();
    const long n = spec.sites;
    const long x = wrap(dx, n);
    double sum = 0.0;
    for (long k = 0; k < n; ++k) {
        sum += std::cos(kTwoPi * static_cast<double>((k * x) % n) / static_cast<double>(n));
    }
    return sum / static_cast<double>(n);
}

CommutatorField CommutatorField::compute(const LatticeSpec& spec, unsigned threads) {
    spec.validate();
    CommutatorField f;
    f.spec_ = spec;
    const long n = spec.sites;
    const long span = 2L * spec.timeSteps - 1;
    f.values_.assign(static_cast<std::size_t>(n * span), 0.0);
    const auto omega = frequencies(spec);

    auto fill = [&](long rowBegin, long rowEnd) {
        for (long row = rowBegin; row < rowEnd; ++row) {
            const double dt = static_cast<double>(row - (spec.timeSteps - 1)) * spec.timeStep;
            for (long dx = 0; dx < n; ++dx) {
                f.values_[static_cast<std::size_t>(row * n + dx)] = modeSum(spec, omega, dx, dt);
            }
        }
    };
    const long workers = std::clamp<long>(threads, 1, span);
    if (workers == 1) {
        fill(0, span);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (span + workers - 1) / workers;
        for (long w = 0; w < workers; ++w) {
            const long begin = w * chunk;
            const long end = std::min(span, begin + chunk);
            if (begin < end) {
                pool.emplace_back(fill, begin, end);
            }
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    return f;
}

double CommutatorField::at(long dx, long dtSteps) const {
    const long last = spec_.timeSteps - 1;
    if (dtSteps < -last || dtSteps > last) {
        throw ValidationError("time separation outside the tabulated range");
    }
    const long n = spec_.sites;
    return values_[static_cast<std::size_t>((dtSteps + last) * n + wrap(dx, n))];
}

std::vector<CommutatorField::Row> CommutatorField::rows() const {
    std::vector<Row> out;
    out.reserve(static_cast<std::size_t>(spec_.sites * spec_.timeSteps));
    for (long s = 0; s < spec_.timeSteps; ++s) {
        for (long dx = 0; dx < spec_.sites; ++dx) {
            out.push_back({dx, static_cast<double>(s) * spec_.timeStep, at(dx, s)});
        }
    }
    return out;
}

std::string vertexLabel(int x, int t) { return "x" + std::to_string(x) + "t" + std::to_string(t); }

LatticeGraph commutationGraph(const LatticeSpec& spec, double eps, unsigned threads) {
    requireEps(eps);
    return commutationGraph(CommutatorField::compute(spec, threads), eps);
}

LatticeGraph commutationGraph(const CommutatorField& field, double eps) {
    requireEps(eps);
    const LatticeSpec& spec = field.spec();
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(spec.sites * spec.timeSteps));
    for (int t = 0; t < spec.timeSteps; ++t) {
        for (int x = 0; x < spec.sites; ++x) {
            labels.push_back(vertexLabel(x, t));
        }
    }
    topology::CommutationGraph g(std::move(labels));
    for (int ta = 0; ta < spec.timeSteps; ++ta) {
        for (int tb = ta; tb < spec.timeSteps; ++tb) {
            for (int xa = 0; xa < spec.sites; ++xa) {
                for (int xb = (ta == tb ? xa + 1 : 0); xb < spec.sites; ++xb) {
                    if (std::abs(field.at(xa - xb, ta - tb)) < eps) {
                        g.connect(vertexIndex(spec, xa, ta), vertexIndex(spec, xb, tb));
                    }
                }
            }
        }
    }
    LatticeGraph out{std::move(g), std::nullopt};
    if (out.graph.isComplete()) {
        out.warning = "eps makes every pair of lattice points commute";
    } else if (out.graph.isEdgeless()) {
        out.warning = "eps leaves no commuting pair of distinct lattice points";
    }
    return out;
}

int extentAt(const CommutatorField& field, long dtSteps, double eps) {
    const int half = field.spec().sites / 2;
    int extent = 0;
    for (int dx = 0; dx <= half; ++dx) {
        if (std::abs(field.at(dx, dtSteps)) >= eps || std::abs(field.at(-dx, dtSteps)) >= eps) {
            extent = dx;
        }
    }
    return extent;
}

ConeProfile coneProfile(const LatticeSpec& spec, double eps, unsigned threads) {
    spec.validate();
    if (spec.timeSteps < 8) {
        throw ValidationError("cone profile needs at least 8 time steps");
    }
    requireEps(eps);
    return coneProfile(CommutatorField::compute(spec, threads), eps);
}

ConeProfile coneProfile(const CommutatorField& field, double eps) {
    requireEps(eps);
    const LatticeSpec& spec = field.spec();
    if (spec.timeSteps < 8) {
        throw ValidationError("cone profile needs at least 8 time steps");
    }
    ConeProfile p;
    p.threshold = eps;
    const int last = spec.timeSteps / 2;
    for (int dt = 0; dt <= last; ++dt) {
        p.perTimeExtent.push_back({dt, extentAt(field, dt, eps)});
    }

    double meanT = 0.0;
    double meanE = 0.0;
    bool any = false;
    for (int dt = 1; dt <= last; ++dt) {
        meanT += dt;
        meanE += p.perTimeExtent[static_cast<std::size_t>(dt)].extent;
        any = any || p.perTimeExtent[static_cast<std::size_t>(dt)].extent > 0;
    }
    if (!any) {
        throw Error("no cone detected: every extent is zero at eps " + std::to_string(eps));
    }
    meanT /= last;
    meanE /= last;
    double sxx = 0.0;
    double sxy = 0.0;
    for (int dt = 1; dt <= last; ++dt) {
        sxx += (dt - meanT) * (dt - meanT);
        sxy += (dt - meanT) * (p.perTimeExtent[static_cast<std::size_t>(dt)].extent - meanE);
    }
    // Extents are in lattice sites and Δt in steps; convert to sites per unit time.
    p.fittedSpeed = sxy / sxx / spec.timeStep;
    p.intercept = meanE - (sxy / sxx) * meanT;
    if (!(p.fittedSpeed > 0.0)) {
        throw Error("no cone detected: extents do not grow with time");
    }
    return p;
}

double coneExcess(const CommutatorField& field, double eps, double speed, double intercept) {
    const LatticeSpec& spec = field.spec();
    double worst = -std::numeric_limits<double>::infinity();
    for (int dt = 1; dt < spec.timeSteps; ++dt) {
        const double bound = speed * dt * spec.timeStep + intercept;
        for (int dx = 0; dx <= spec.sites / 2; ++dx) {
            if (std::abs(field.at(dx, dt)) >= eps || std::abs(field.at(-dx, dt)) >= eps) {
                worst = std::max(worst, dx - bound);
            }
        }
    }
    return worst;
}

}  // namespace qcausal::lattice
