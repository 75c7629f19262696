#pragma once

#include <functional>
#include <vector>

#include "core/vonneumann.hpp"

namespace commsim {

// One decoherence operator with the decompositions the estimators need.
// L_j^dag L_j is decomposed as a whole to keep term counts minimal.
struct LindbladOperator {
  Matrix op;
  WeightedPauliSum op_sum;
  WeightedPauliSum dagger_sum;
  WeightedPauliSum product_sum;

  bool is_zero() const { return op_sum.empty(); }
};

class LindbladChannel {
 public:
  LindbladChannel(int num_qubits, const std::vector<Matrix>& operators);

  static LindbladChannel none(int num_qubits) {
    return LindbladChannel(num_qubits, {});
  }

  int num_qubits() const { return num_qubits_; }
  const std::vector<LindbladOperator>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }

 private:
  int num_qubits_;
  std::vector<LindbladOperator> ops_;
};

// Spontaneous emission: L = (sqrt(kappa)/2)(X + iY) = sqrt(kappa)|0><1|,
// with L^dag L = (kappa/2)(I - Z).
LindbladChannel damping_channel(double kappa);

// Parameters of the single-qubit damping demo: H = -(omega/2) Z and
// psi0 = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct DampingParams {
  double kappa = 1.0;
  double omega = -2.0;
  double theta = 0.0;
  double phi = 0.0;
  double delta_t = 0.1;

  void validate() const;
  Matrix hamiltonian() const;
  StateVector initial_state() const;
};

// <Phi| L_j rho(dt) L_j^dag |Phi'> for |Phi'> = A|Phi>; diagonal when A = I.
EstimationResult first_term_element(const RhoPrep& rho, const StateVector& phi,
                                    const LindbladChannel& channel, int j,
                                    const Matrix& a_op,
                                    const EstimationMode& mode);

// <Phi| {rho(dt), L_j^dag L_j} |Phi'>. For A = I this is the direct
// anti-commutator read-out; otherwise it is assembled from the two
// one-sided elements <Phi|K rho|Phi'> + <Phi|rho K|Phi'> with K = L^dag L.
EstimationResult second_term_element(const RhoPrep& rho, const StateVector& phi,
                                     const LindbladChannel& channel, int j,
                                     const Matrix& a_op,
                                     const EstimationMode& mode);

// Entrywise i[rho, H] + sum_j (L_j rho L_j^dag - (1/2){rho, L_j^dag L_j}).
// m_sum_h may be empty for a pure dissipator. Entries evaluate concurrently
// and assemble in index order.
RateMatrix open_rate_matrix(const RhoPrep& rho, const LindbladChannel& channel,
                            const WeightedPauliSum& m_sum_h,
                            const EstimationMode& mode);

// Demo wrapper: the full damping rate matrix at rho(delta_t) grown from
// psi0(theta, phi) under H = -(omega/2) Z.
RateMatrix damping_demo_rate_matrix(const DampingParams& params,
                                    const EstimationMode& mode);

// One first-order Kraus update: sum_r N_r rho N_r^dag with
// N_0 = I + (-iH - (1/2) L^dag L) dt and N_1 = sqrt(dt) L. The channel may
// hold at most one operator (none degenerates to the N_0 term alone).
Matrix kraus_step(const DensityMatrix& rho, const Matrix& h,
                  const LindbladChannel& channel, double delta_t);

using RateEvaluator = std::function<Matrix(const Matrix&)>;

// Dense master-equation right-hand side, for integration and demos.
RateEvaluator lindblad_rhs(Matrix h, std::vector<Matrix> lindblad_ops);

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;

  const Matrix& state_at(double t) const;
};

// Classic fixed-step RK4 for d rho / dt = rhs(rho), recording every step.
// Throws NumericError on non-finite intermediates.
Trajectory integrate_rates(const DensityMatrix& rho0, const RateEvaluator& rhs,
                           double t_final, double dt);

// Fig.-style landscape surfaces of the damping demo over (theta, t).
enum class DampingPanel {
  UnitaryOffdiagonal,       // i <0|[rho(t), H]|1>
  JumpDiagonal,             // <0| L rho(t) L^dag |0>
  AnticommutatorDiagonal,   // -(1/2) <1| {rho(t), L^dag L} |1>
  AnticommutatorOffdiagonal // -<0| rho(t) L^dag L |1>
};

enum class GridComponent { Real, Imag, Abs };

// values(i, j) = component of the panel expression at (thetas[i], times[j]).
// Cells evaluate concurrently; assembly is ordered.
Eigen::MatrixXd damping_landscape(DampingPanel panel, double omega,
                                  double kappa, double phi,
                                  const std::vector<double>& thetas,
                                  const std::vector<double>& times,
                                  const EstimationMode& mode,
                                  GridComponent component = GridComponent::Real);

}  // namespace commsim
