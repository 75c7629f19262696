#include "core/operators.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "core/errors.hpp"

namespace commsim {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument(std::string(what) + ": matrix must be square, got " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows()) {
    throw DimensionMismatch(std::string(what) + ": dimensions differ (" +
                            std::to_string(a.rows()) + " vs " +
                            std::to_string(b.rows()) + ")");
  }
}

}  // namespace

Matrix dagger(const Matrix& op) {
  require_square(op, "dagger");
  return op.adjoint();
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

bool all_finite(const Matrix& m) {
  return m.allFinite();
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Matrix gram = m.adjoint() * m;
  gram -= Matrix::Identity(m.rows(), m.cols());
  return gram.cwiseAbs().maxCoeff() <= tol;
}

Matrix evolve_unitary(const Matrix& h, double t) {
  require_square(h, "evolve_unitary");
  if (!all_finite(h)) throw InvalidArgument("evolve_unitary: non-finite Hamiltonian");
  if (!is_hermitian(h, kHermitianTolerance)) {
    throw InvalidArgument("evolve_unitary: Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericError("evolve_unitary: eigendecomposition failed");
  }
  const auto& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  Vector phases(values.size());
  for (Eigen::Index l = 0; l < values.size(); ++l) {
    phases[l] = std::exp(Complex(0.0, -values[l] * t));
  }
  return vectors * phases.asDiagonal() * vectors.adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Matrix identity_matrix(Eigen::Index dim) {
  return Matrix::Identity(dim, dim);
}

const Matrix& pauli_i() {
  static const Matrix m = Matrix::Identity(2, 2);
  return m;
}

const Matrix& pauli_x() {
  static const Matrix m = [] {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
  }();
  return m;
}

const Matrix& pauli_y() {
  static const Matrix m = [] {
    Matrix y(2, 2);
    y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return y;
  }();
  return m;
}

const Matrix& pauli_z() {
  static const Matrix m = [] {
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
  }();
  return m;
}

const Matrix& hadamard_gate() {
  static const Matrix m = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix h(2, 2);
    h << s, s, s, -s;
    return h;
  }();
  return m;
}

Matrix phase_gate(double chi) {
  Matrix r = Matrix::Identity(2, 2);
  r(1, 1) = std::exp(Complex(0.0, chi));
  return r;
}

}  // namespace commsim
