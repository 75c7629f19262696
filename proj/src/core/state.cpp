#include "core/state.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "core/errors.hpp"
#include "core/operators.hpp"

namespace commsim {

StateVector::StateVector(int num_qubits, Vector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits_ < 1) {
    throw InvalidArgument("StateVector: need at least one qubit");
  }
  if (amplitudes_.size() != dim_for_qubits(num_qubits_)) {
    throw DimensionMismatch(
        "StateVector: expected " +
        std::to_string(dim_for_qubits(num_qubits_)) + " amplitudes, got " +
        std::to_string(amplitudes_.size()));
  }
  if (!amplitudes_.allFinite()) {
    throw InvalidArgument("StateVector: non-finite amplitude");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw InvalidArgument("StateVector: squared norm " + std::to_string(norm2) +
                          " is not 1; normalise first or use a raw vector");
  }
}

StateVector StateVector::basis(int num_qubits, Eigen::Index index) {
  const Eigen::Index dim = dim_for_qubits(num_qubits);
  if (index < 0 || index >= dim) {
    throw InvalidArgument("StateVector::basis: index " + std::to_string(index) +
                          " out of range for " + std::to_string(num_qubits) +
                          " qubits");
  }
  Vector amps = Vector::Zero(dim);
  amps[index] = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::bloch(double theta, double phi) {
  Vector amps(2);
  amps[0] = std::cos(theta / 2.0);
  amps[1] = std::exp(Complex(0.0, phi)) * std::sin(theta / 2.0);
  return StateVector(1, std::move(amps));
}

StateVector StateVector::normalised(int num_qubits, const Vector& raw) {
  const double norm = raw.norm();
  if (!(norm > 1e-14)) {
    throw InvalidArgument("StateVector::normalised: vector has zero norm");
  }
  return StateVector(num_qubits, raw / norm);
}

Complex StateVector::overlap(const StateVector& other) const {
  if (num_qubits_ != other.num_qubits_) {
    throw DimensionMismatch("StateVector::overlap: qubit counts differ");
  }
  return amplitudes_.dot(other.amplitudes_);
}

DensityMatrix::DensityMatrix(Matrix op) : op_(std::move(op)) {
  if (op_.rows() != op_.cols()) {
    throw InvalidArgument("DensityMatrix: matrix must be square");
  }
  if (!op_.allFinite()) {
    throw InvalidArgument("DensityMatrix: non-finite entry");
  }
  if (!is_hermitian(op_, kHermitianTolerance)) {
    throw InvalidArgument("DensityMatrix: not Hermitian within 1e-10");
  }
  const Complex tr = op_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kHermitianTolerance) {
    throw InvalidArgument("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op_);
  if (solver.info() != Eigen::Success) {
    throw NumericError("DensityMatrix: eigendecomposition failed");
  }
  if (solver.eigenvalues().minCoeff() < -kHermitianTolerance) {
    throw InvalidArgument("DensityMatrix: negative eigenvalue beyond tolerance");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const Vector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

}  // namespace commsim
