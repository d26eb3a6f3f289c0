#pragma once

// Finite-dimensional state-vector engine: states, projective observables,
// Born-rule probabilities, collapse, unitary evolution and amplitudes.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qcausal::quantum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Axis = Eigen::Vector3d;

// Entrywise tolerance for projector / unitary structure checks.
inline constexpr double kStructuralTol = 1e-10;
// Tolerance on |norm - 1| for state vectors; also the zero-probability floor.
inline constexpr double kNormTol = 1e-12;

/// A unit vector of complex amplitudes.
///
/// The constructor rejects vectors whose Euclidean norm is not 1 within
/// kNormTol; use normalized() to build one from an arbitrary non-zero vector.
class StateVector {
public:
    explicit StateVector(Vector amplitudes);

    static StateVector normalized(Vector amplitudes);
    static StateVector basis(std::size_t dimension, std::size_t index);
    static StateVector up();
    static StateVector down();

    std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector& amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

private:
    Vector amps_;
};

struct Branch {
    double eigenvalue;
    Matrix projector;
};

/// Projective observable given by its spectral decomposition.
///
/// Validated on construction: Hermitian idempotent projectors, mutually
/// orthogonal, summing to the identity, with pairwise distinct eigenvalues.
class Pvm {
public:
    explicit Pvm(std::vector<Branch> branches);

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return branches_.size(); }
    const std::vector<Branch>& branches() const { return branches_; }
    const Branch& operator[](std::size_t i) const { return branches_.at(i); }

    // Same observable acting on subsystem `site` of `sites` identical factors
    // (site 0 is the most significant tensor factor).
    Pvm embedded(std::size_t site, std::size_t sites) const;

private:
    struct Trusted {};
    Pvm(Trusted, std::vector<Branch> branches, std::size_t dim);

    std::vector<Branch> branches_;
    std::size_t dim_ = 0;
};

class UnitaryOp {
public:
    explicit UnitaryOp(Matrix matrix);

    std::size_t dimension() const { return static_cast<std::size_t>(u_.rows()); }
    const Matrix& matrix() const { return u_; }

private:
    Matrix u_;
};

struct Outcome {
    double eigenvalue;
    double probability;
};

struct MeasurementRecord {
    std::vector<Outcome> outcomes;

    double total() const;
};

struct SampledOutcome {
    std::size_t branch;
    StateVector state;
};

/// Kronecker product of two matrices, row-major in the first factor.
Matrix kron(const Matrix& a, const Matrix& b);

/// a ⊗ b with the index of `a` varying slowest.
StateVector tensor(const StateVector& a, const StateVector& b);

/// ⟨phi|psi⟩, conjugate-linear in phi.
Complex amplitude(const StateVector& phi, const StateVector& psi);

/// ⟨psi|P|psi⟩ for a single projector; clamped at zero from below.
double projectorProbability(const Matrix& projector, const StateVector& psi);

MeasurementRecord measureProbabilities(const Pvm& obs, const StateVector& psi);

/// P_i|psi⟩ renormalised. Throws ImpossibleOutcome when the branch
/// probability is at or below kNormTol.
StateVector collapse(const Pvm& obs, std::size_t branchIndex, const StateVector& psi);

StateVector applyUnitary(const UnitaryOp& u, const StateVector& psi);

/// Born-rule sample driven by a seeded mt19937_64. Identical inputs give
/// identical outputs on every platform; zero-probability branches are never
/// selected.
SampledOutcome sampleOutcome(const Pvm& obs, const StateVector& psi, std::uint64_t seed);

/// Spin-1/2 observable along a unit axis: eigenvalue +1 with (I + n·σ)/2
/// first, then -1 with (I - n·σ)/2.
Pvm spinPvm(const Axis& axis);

/// Unit axis at `radians` from +z towards +x.
Axis axisInXZ(double radians);

/// splitmix64 finaliser; used to derive independent per-trial seeds.
std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace qcausal::quantum
