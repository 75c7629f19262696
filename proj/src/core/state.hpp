#pragma once

#include <string>

#include "core/types.hpp"

namespace commsim {

// Normalised pure state of an L-qubit register, little-endian: qubit 0 is
// the least significant bit of the basis index. Immutable after
// construction; construction rejects wrong lengths, non-finite amplitudes
// and vectors whose squared norm differs from 1 by more than kNormTolerance.
class StateVector {
 public:
  StateVector(int num_qubits, Vector amplitudes);

  static StateVector basis(int num_qubits, Eigen::Index index);

  // cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
  static StateVector bloch(double theta, double phi);

  // Normalises a raw vector first; throws on (near-)zero norm.
  static StateVector normalised(int num_qubits, const Vector& raw);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }

  // <this|other>
  Complex overlap(const StateVector& other) const;

 private:
  int num_qubits_;
  Vector amplitudes_;
};

// Density operator with the usual physicality checks: Hermitian within
// 1e-10, unit trace within 1e-10, eigenvalues >= -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix op);

  static DensityMatrix pure(const StateVector& psi);

  Eigen::Index dim() const { return op_.rows(); }
  const Matrix& matrix() const { return op_; }

 private:
  Matrix op_;
};

}  // namespace commsim
