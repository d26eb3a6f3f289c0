#include "qcausal/quantum/core.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "qcausal/error.hpp"

namespace qcausal::quantum {

namespace {

bool nearlyZero(const Matrix& m, double tol) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (std::abs(m(r, c)) > tol) {
                return false;
            }
        }
    }
    return true;
}

void requireSameDimension(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw ValidationError(msg.str());
    }
}

Matrix identity(std::size_t n) {
    const auto d = static_cast<Eigen::Index>(n);
    return Matrix::Identity(d, d);
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

}  // namespace

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) {
        throw ValidationError("state vector must have dimension >= 1");
    }
    const double norm = amps_.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTol) {
        std::ostringstream msg;
        msg << "state vector is not normalised (norm " << norm << ")";
        throw ValidationError(msg.str());
    }
}

StateVector StateVector::normalized(Vector amplitudes) {
    const double norm = amplitudes.norm();
    if (amplitudes.size() == 0 || !(norm > 0.0) || !std::isfinite(norm)) {
        throw ValidationError("cannot normalise a zero or empty vector");
    }
    amplitudes /= norm;
    return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dimension, std::size_t index) {
    if (dimension == 0 || index >= dimension) {
        throw ValidationError("basis index out of range");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::up() { return basis(2, 0); }
StateVector StateVector::down() { return basis(2, 1); }

Pvm::Pvm(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) {
        throw ValidationError("observable needs at least one branch");
    }
    const Eigen::Index d = branches_.front().projector.rows();
    if (d == 0) {
        throw ValidationError("observable dimension must be >= 1");
    }
    dim_ = static_cast<std::size_t>(d);
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const Matrix& p = branches_[i].projector;
        if (p.rows() != d || p.cols() != d) {
            throw ValidationError("projectors must be square and share one dimension");
        }
        if (!std::isfinite(branches_[i].eigenvalue)) {
            throw ValidationError("eigenvalues must be finite");
        }
        if (!nearlyZero(p - p.adjoint(), kStructuralTol)) {
            throw ValidationError("projector " + std::to_string(i) + " is not Hermitian");
        }
        if (!nearlyZero(p * p - p, kStructuralTol)) {
            throw ValidationError("projector " + std::to_string(i) + " is not idempotent");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (branches_[j].eigenvalue == branches_[i].eigenvalue) {
                throw ValidationError("eigenvalues must be pairwise distinct");
            }
            if (!nearlyZero(branches_[j].projector * p, kStructuralTol)) {
                throw ValidationError("projectors " + std::to_string(j) + " and " +
                                      std::to_string(i) + " are not orthogonal");
            }
        }
        sum += p;
    }
    if (!nearlyZero(sum - Matrix::Identity(d, d), kStructuralTol)) {
        throw ValidationError("projectors do not sum to the identity");
    }
}

Pvm::Pvm(Trusted, std::vector<Branch> branches, std::size_t dim)
    : branches_(std::move(branches)), dim_(dim) {}

Pvm Pvm::embedded(std::size_t site, std::size_t sites) const {
    if (site >= sites) {
        throw ValidationError("site index out of range");
    }
    const Matrix left = identity(ipow(dim_, site));
    const Matrix right = identity(ipow(dim_, sites - site - 1));
    std::vector<Branch> lifted;
    lifted.reserve(branches_.size());
    for (const auto& b : branches_) {
        lifted.push_back({b.eigenvalue, kron(kron(left, b.projector), right)});
    }
    // Tensoring with identities preserves every projector identity exactly.
    return Pvm(Trusted{}, std::move(lifted), ipow(dim_, sites));
}

UnitaryOp::UnitaryOp(Matrix matrix) : u_(std::move(matrix)) {
    if (u_.rows() == 0 || u_.rows() != u_.cols()) {
        throw ValidationError("unitary must be a non-empty square matrix");
    }
    if (!nearlyZero(u_.adjoint() * u_ - Matrix::Identity(u_.rows(), u_.cols()), kStructuralTol)) {
        throw ValidationError("matrix is not unitary");
    }
}

double MeasurementRecord::total() const {
    double s = 0.0;
    for (const auto& o : outcomes) {
        s += o.probability;
    }
    return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const auto& va = a.amplitudes();
    const auto& vb = b.amplitudes();
    Vector out(va.size() * vb.size());
    for (Eigen::Index i = 0; i < va.size(); ++i) {
        out.segment(i * vb.size(), vb.size()) = va(i) * vb;
    }
    return StateVector::normalized(std::move(out));
}

Complex amplitude(const StateVector& phi, const StateVector& psi) {
    requireSameDimension(phi.dimension(), psi.dimension(), "amplitude");
    return phi.amplitudes().dot(psi.amplitudes());  // Eigen conjugates the left operand
}

double projectorProbability(const Matrix& projector, const StateVector& psi) {
    requireSameDimension(static_cast<std::size_t>(projector.rows()), psi.dimension(),
                         "probability");
    const double p = (projector * psi.amplitudes()).squaredNorm();
    return std::max(p, 0.0);
}

MeasurementRecord measureProbabilities(const Pvm& obs, const StateVector& psi) {
    requireSameDimension(obs.dimension(), psi.dimension(), "measureProbabilities");
    MeasurementRecord rec;
    rec.outcomes.reserve(obs.size());
    for (const auto& b : obs.branches()) {
        rec.outcomes.push_back({b.eigenvalue, projectorProbability(b.projector, psi)});
    }
    return rec;
}

StateVector collapse(const Pvm& obs, std::size_t branchIndex, const StateVector& psi) {
    requireSameDimension(obs.dimension(), psi.dimension(), "collapse");
    if (branchIndex >= obs.size()) {
        throw ValidationError("branch index out of range");
    }
    Vector projected = obs[branchIndex].projector * psi.amplitudes();
    const double prob = projected.squaredNorm();
    if (!(prob > kNormTol)) {
        throw ImpossibleOutcome("collapse onto branch " + std::to_string(branchIndex) +
                                " with zero probability");
    }
    return StateVector::normalized(std::move(projected));
}

StateVector applyUnitary(const UnitaryOp& u, const StateVector& psi) {
    requireSameDimension(u.dimension(), psi.dimension(), "applyUnitary");
    // Renormalising absorbs rounding only; the validated matrix already preserves norm.
    return StateVector::normalized(u.matrix() * psi.amplitudes());
}

SampledOutcome sampleOutcome(const Pvm& obs, const StateVector& psi, std::uint64_t seed) {
    const MeasurementRecord rec = measureProbabilities(obs, psi);
    double live = 0.0;
    for (const auto& o : rec.outcomes) {
        if (o.probability > kNormTol) {
            live += o.probability;
        }
    }
    std::mt19937_64 rng(mixSeed(seed, 0));
    // 53 random mantissa bits; avoids implementation-defined distributions.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * live;

    std::size_t chosen = rec.outcomes.size();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < rec.outcomes.size(); ++i) {
        if (rec.outcomes[i].probability <= kNormTol) {
            continue;
        }
        chosen = i;
        cumulative += rec.outcomes[i].probability;
        if (u < cumulative) {
            break;
        }
    }
    return {chosen, collapse(obs, chosen, psi)};
}

Pvm spinPvm(const Axis& axis) {
    if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > kStructuralTol) {
        throw ValidationError("spin axis must be a unit vector");
    }
    const Axis n = axis / axis.norm();
    const Complex i{0.0, 1.0};
    Matrix ndotsigma(2, 2);
    ndotsigma << n.z(), n.x() - i * n.y(),
                 n.x() + i * n.y(), -n.z();
    const Matrix id = Matrix::Identity(2, 2);
    return Pvm({{+1.0, (id + ndotsigma) / 2.0}, {-1.0, (id - ndotsigma) / 2.0}});
}

Axis axisInXZ(double radians) { return Axis(std::sin(radians), 0.0, std::cos(radians)); }

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace qcausal::quantum
