#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/estimator.hpp"

namespace commsim {

// Where a rate-matrix entry came from: the control angles evaluated, the
// translation power used to reach it, and the sampling error attached.
struct EntryProvenance {
  std::vector<double> chi_values;
  int a_power = 0;  // 0 for diagonal entries
  bool sampled = false;
  double std_error = 0.0;
};

// Matrix of d rho / dt elements. Construction enforces the contract of the
// estimators feeding it: Hermitian within max(1e-10, 5 * max std_error) and
// traceless within a matching tolerance.
class RateMatrix {
 public:
  RateMatrix(Matrix values, std::vector<EntryProvenance> provenance);

  Eigen::Index dim() const { return values_.rows(); }
  const Matrix& values() const { return values_; }
  const EntryProvenance& provenance(Eigen::Index n, Eigen::Index m) const {
    return provenance_[n * dim() + m];
  }
  double max_std_error() const;

 private:
  Matrix values_;
  std::vector<EntryProvenance> provenance_;
};

struct ScanReport {
  std::string reference_label;
  std::vector<double> time_grid;
  std::vector<double> values;
  std::vector<double> std_errors;
  bool is_stationary = false;
  // (omega, uncertainty); filled by extract_frequency callers
  std::optional<std::pair<double, double>> extracted_frequency;
};

// Cyclic shift: T^p |n> = |(n + p) mod 2^L>. Requires 1 <= p <= 2^L - 1.
Matrix translation_operator(int num_qubits, int power);

// Unitary mapping `from` to `to`, built by completing each vector to an
// orthonormal basis (Gram-Schmidt over the canonical vectors) and chaining
// the two frames. Lets eigenvectors act as reference pairs for off-diagonal
// elements in the eigenbasis.
Matrix basis_completion_unitary(const Vector& from, const Vector& to);

// d rho_nn / dt = i <n|[rho(t), H]|n> with H given as m_sum.
EstimationResult diagonal_rate(const RhoPrep& rho, Eigen::Index n,
                               const WeightedPauliSum& m_sum,
                               const EstimationMode& mode);

// d rho_{n, n+p} / dt reached through A = T^p.
EstimationResult offdiagonal_rate(const RhoPrep& rho, Eigen::Index n, int p,
                                  const WeightedPauliSum& m_sum,
                                  const EstimationMode& mode);

// All 4^L entries of i[rho(t), H], assembled from diagonal_rate and
// offdiagonal_rate. Entries are independent and evaluated concurrently
// (COMMSIM_THREADS); assembly order is fixed by index. In sampled mode each
// entry draws from its own derived seed.
RateMatrix rate_matrix(const RhoPrep& rho, const WeightedPauliSum& m_sum,
                       const EstimationMode& mode);

// Evaluates the commutator expectation for every candidate reference state
// over the time grid. A candidate is flagged stationary when every |value|
// stays below the tolerance (default 1e-9 exact, 5 * std_error per point
// when sampled). The rho_prep evolution must be Hamiltonian-based; the grid
// replaces its time.
std::vector<ScanReport> stationary_scan(const RhoPrep& rho,
                                        const std::vector<StateVector>& phi_candidates,
                                        const WeightedPauliSum& m_sum,
                                        const std::vector<double>& time_grid,
                                        const EstimationMode& mode,
                                        double tolerance = -1.0);

// Dominant |omega| of a sampled signal: discrete spectral peak with
// quadratic interpolation. Returns (omega_hat, uncertainty) where the
// uncertainty is the frequency bin width 2 pi / (N dt). Needs >= 8 uniform
// grid points spanning at least one period; stationary or constant reports
// raise "no oscillation".
std::pair<double, double> extract_frequency(const ScanReport& report);

}  // namespace commsim
