#include "support/oracles.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace commsim::test {

Matrix dense_rho(const Vector& psi0, const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const auto& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  Vector phases(values.size());
  for (Eigen::Index l = 0; l < values.size(); ++l) {
    phases[l] = std::exp(Complex(0.0, -values[l] * t));
  }
  const Vector psi_t = vectors * phases.asDiagonal() * vectors.adjoint() * psi0;
  return psi_t * psi_t.adjoint();
}

Vector final_state_closed_form(const Vector& psi_t, const Vector& phi,
                               const Matrix& n, const Matrix& a,
                               const Matrix& m, double chi) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector plus(2), minus(2);
  plus << s, s;
  minus << s, -s;

  const Vector branch0 =
      Eigen::kroneckerProduct(plus, Eigen::kroneckerProduct(phi, psi_t).eval())
          .eval();
  const Vector reference = (n * psi_t).eval();
  const Vector system = (m * (a * phi)).eval();
  const Vector branch1 =
      Eigen::kroneckerProduct(minus,
                              Eigen::kroneckerProduct(reference, system).eval())
          .eval();
  return s * (branch0 + std::exp(Complex(0.0, chi)) * branch1);
}

std::pair<double, double> closed_form_probabilities(const Vector& psi_t,
                                                    const Vector& phi,
                                                    const Matrix& n,
                                                    const Matrix& a,
                                                    const Matrix& m,
                                                    double chi) {
  const Complex norm_term =
      (phi.adjoint() * a.adjoint() * m.adjoint() * m * a * phi)(0) *
      (psi_t.adjoint() * n.adjoint() * n * psi_t)(0);
  const Complex cross = std::exp(Complex(0.0, chi)) *
                        (psi_t.adjoint() * m * a * phi)(0) *
                        (phi.adjoint() * n * psi_t)(0);
  const double p0 =
      0.25 * (1.0 + norm_term.real() + 2.0 * cross.real());
  const double p1 =
      0.25 * (1.0 + norm_term.real() - 2.0 * cross.real());
  return {p0, p1};
}

double dense_zchi(const Matrix& rho, const Vector& phi, const Matrix& n,
                  const Matrix& m, const Matrix& a, double chi) {
  const Complex forward =
      std::exp(Complex(0.0, chi)) * (phi.adjoint() * n * rho * m * a * phi)(0);
  const Complex backward =
      std::exp(Complex(0.0, -chi)) *
      (phi.adjoint() * a.adjoint() * m.adjoint() * rho * n.adjoint() * phi)(0);
  return 0.5 * (forward + backward).real();
}

Matrix dense_vn_rhs(const Matrix& rho, const Matrix& h) {
  return Complex(0.0, 1.0) * (rho * h - h * rho);
}

Matrix dense_lindblad_rhs(const Matrix& rho, const Matrix& h,
                          const std::vector<Matrix>& lindblad_ops) {
  Matrix out = dense_vn_rhs(rho, h);
  for (const Matrix& l : lindblad_ops) {
    const Matrix product = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (product * rho + rho * product);
  }
  return out;
}

}  // namespace commsim::test
