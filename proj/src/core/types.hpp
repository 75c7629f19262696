#pragma once

#include <complex>

#include <Eigen/Dense>

namespace commsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Amplitude buffer that is allowed to be unnormalised (e.g. the output of a
// circuit with non-unitary controlled operators). Normalised register states
// use StateVector instead.
using RawVector = Vector;

inline constexpr double kDropTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-12;

inline Eigen::Index dim_for_qubits(int num_qubits) {
  return Eigen::Index{1} << num_qubits;
}

}  // namespace commsim
