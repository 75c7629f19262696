#pragma once

#include "core/types.hpp"

namespace commsim {

// Conjugate transpose. dagger(dagger(op)) reproduces op exactly.
Matrix dagger(const Matrix& op);

// ab - ba. Throws DimensionMismatch when the shapes differ.
Matrix commutator(const Matrix& a, const Matrix& b);

// ab + ba. Throws DimensionMismatch when the shapes differ.
Matrix anticommutator(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = kHermitianTolerance);
bool is_unitary(const Matrix& m, double tol = kUnitaryTolerance);

// exp(-i h t) through the eigendecomposition of the Hermitian matrix h.
// Throws InvalidArgument when h is not Hermitian within kHermitianTolerance.
Matrix evolve_unitary(const Matrix& h, double t);

Matrix kron(const Matrix& a, const Matrix& b);

// Single-qubit constants and gates.
Matrix identity_matrix(Eigen::Index dim);
const Matrix& pauli_i();
const Matrix& pauli_x();
const Matrix& pauli_y();
const Matrix& pauli_z();
const Matrix& hadamard_gate();

// R(chi) = diag(1, e^{i chi}): Z-axis rotation with the phase fixed so the
// control branch picks up exactly e^{i chi} and no global phase.
Matrix phase_gate(double chi);

}  // namespace commsim
