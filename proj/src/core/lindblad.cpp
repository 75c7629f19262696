#include "core/lindblad.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/operators.hpp"
#include "core/parallel.hpp"

namespace commsim {

namespace {

bool is_identity(const Matrix& m) {
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <=
         1e-14;
}

void accumulate(EstimationResult& total, const EstimationResult& part,
                Complex scale) {
  total.value += scale * part.value;
  total.std_error = std::hypot(total.std_error,
                               std::abs(scale) * part.std_error);
  total.shots_used += part.shots_used;
  total.terms_evaluated += part.terms_evaluated;
}

}  // namespace

LindbladChannel::LindbladChannel(int num_qubits,
                                 const std::vector<Matrix>& operators)
    : num_qubits_(num_qubits) {
  if (num_qubits_ < 1) {
    throw InvalidArgument("LindbladChannel: need at least one qubit");
  }
  const Eigen::Index dim = dim_for_qubits(num_qubits_);
  ops_.reserve(operators.size());
  for (const Matrix& op : operators) {
    if (op.rows() != dim || op.cols() != dim) {
      throw DimensionMismatch("LindbladChannel: operator dimension mismatch");
    }
    if (!op.allFinite()) {
      throw InvalidArgument("LindbladChannel: non-finite operator");
    }
    LindbladOperator entry{
        op,
        pauli_decompose(op),
        pauli_decompose(op.adjoint()),
        pauli_decompose(op.adjoint() * op),
    };
    ops_.push_back(std::move(entry));
  }
}

LindbladChannel damping_channel(double kappa) {
  if (kappa < 0) throw InvalidArgument("damping_channel: kappa must be >= 0");
  const Matrix l = (std::sqrt(kappa) / 2.0) *
                   (pauli_x() + Complex(0.0, 1.0) * pauli_y());
  return LindbladChannel(1, {l});
}

void DampingParams::validate() const {
  if (kappa < 0) throw InvalidArgument("DampingParams: kappa must be >= 0");
  if (!(delta_t > 0)) throw InvalidArgument("DampingParams: delta_t must be > 0");
}

Matrix DampingParams::hamiltonian() const {
  return (-omega / 2.0) * pauli_z();
}

StateVector DampingParams::initial_state() const {
  return StateVector::bloch(theta, phi);
}

EstimationResult first_term_element(const RhoPrep& rho, const StateVector& phi,
                                    const LindbladChannel& channel, int j,
                                    const Matrix& a_op,
                                    const EstimationMode& mode) {
  if (j < 0 || static_cast<std::size_t>(j) >= channel.size()) {
    throw InvalidArgument("first_term_element: operator index out of range");
  }
  const LindbladOperator& lop = channel.ops()[j];
  if (lop.is_zero()) return {};
  return matrix_element(rho, phi, lop.op_sum, lop.dagger_sum, a_op, mode);
}

EstimationResult second_term_element(const RhoPrep& rho, const StateVector& phi,
                                     const LindbladChannel& channel, int j,
                                     const Matrix& a_op,
                                     const EstimationMode& mode) {
  if (j < 0 || static_cast<std::size_t>(j) >= channel.size()) {
    throw InvalidArgument("second_term_element: operator index out of range");
  }
  const LindbladOperator& lop = channel.ops()[j];
  if (lop.is_zero()) return {};

  if (is_identity(a_op)) {
    return anticommutator_expectation(rho, phi, lop.product_sum, mode);
  }

  const int L = rho.psi0.num_qubits();
  const WeightedPauliSum identity = WeightedPauliSum::identity(L);
  const EstimationResult k_rho = matrix_element(
      rho, phi, lop.product_sum, identity, a_op, mode.child(0x4b72));
  const EstimationResult rho_k = matrix_element(
      rho, phi, identity, lop.product_sum, a_op, mode.child(0x4b73));

  EstimationResult out;
  accumulate(out, k_rho, 1.0);
  accumulate(out, rho_k, 1.0);
  return out;
}

RateMatrix open_rate_matrix(const RhoPrep& rho, const LindbladChannel& channel,
                            const WeightedPauliSum& m_sum_h,
                            const EstimationMode& mode) {
  const int L = rho.psi0.num_qubits();
  if (channel.num_qubits() != L) {
    throw DimensionMismatch("open_rate_matrix: channel register mismatch");
  }
  const Eigen::Index dim = dim_for_qubits(L);
  Matrix values(dim, dim);
  std::vector<EntryProvenance> provenance(dim * dim);

  parallel_for(dim * dim, [&](std::int64_t task) {
    const Eigen::Index n = task / dim;
    const int p = static_cast<int>(task % dim);
    const Eigen::Index m = (n + p) % dim;
    const StateVector reference = StateVector::basis(L, n);
    const Matrix a_op = p == 0 ? identity_matrix(dim)
                               : translation_operator(L, p);
    const EstimationMode entry_mode = mode.child(static_cast<std::uint64_t>(task));

    EstimationResult entry;
    std::vector<double> chi_values;
    if (!m_sum_h.empty()) {
      EstimationResult unitary_part;
      if (p == 0) {
        unitary_part = commutator_expectation(rho, reference, m_sum_h,
                                              entry_mode.child(0));
        chi_values.push_back(std::numbers::pi / 2.0);
      } else {
        unitary_part =
            commutator_element(rho, reference, a_op, m_sum_h, entry_mode.child(0));
        chi_values.push_back(0.0);
        chi_values.push_back(std::numbers::pi / 2.0);
      }
      accumulate(entry, unitary_part, 1.0);
    }

    for (std::size_t j = 0; j < channel.size(); ++j) {
      const auto salt = static_cast<std::uint64_t>(2 * j + 1);
      const EstimationResult first =
          first_term_element(rho, reference, channel, static_cast<int>(j),
                             a_op, entry_mode.child(salt));
      const EstimationResult second =
          second_term_element(rho, reference, channel, static_cast<int>(j),
                              a_op, entry_mode.child(salt + 1));
      accumulate(entry, first, 1.0);
      accumulate(entry, second, -0.5);
      chi_values.push_back(0.0);
      chi_values.push_back(std::numbers::pi / 2.0);
    }

    values(n, m) = entry.value;
    provenance[n * dim + m] = {std::move(chi_values), p, mode.is_sampled(),
                               entry.std_error};
  });

  return RateMatrix(std::move(values), std::move(provenance));
}

RateMatrix damping_demo_rate_matrix(const DampingParams& params,
                                    const EstimationMode& mode) {
  params.validate();
  const Matrix h = params.hamiltonian();
  const RhoPrep prep{params.initial_state(),
                     HamiltonianEvolution{h, params.delta_t}};
  return open_rate_matrix(prep, damping_channel(params.kappa),
                          pauli_decompose(h), mode);
}

Matrix kraus_step(const DensityMatrix& rho, const Matrix& h,
                  const LindbladChannel& channel, double delta_t) {
  if (!(delta_t > 0)) throw InvalidArgument("kraus_step: delta_t must be > 0");
  if (channel.size() > 1) {
    throw InvalidArgument("kraus_step: at most one Lindblad operator");
  }
  const Eigen::Index dim = rho.dim();
  if (h.rows() != dim || h.cols() != dim) {
    throw DimensionMismatch("kraus_step: Hamiltonian dimension mismatch");
  }

  Matrix n0 = Matrix::Identity(dim, dim) + Complex(0.0, -delta_t) * h;
  Matrix out;
  if (channel.size() == 1) {
    const Matrix& l = channel.ops()[0].op;
    n0 -= 0.5 * delta_t * (l.adjoint() * l);
    out = n0 * rho.matrix() * n0.adjoint() +
          delta_t * (l * rho.matrix() * l.adjoint());
  } else {
    out = n0 * rho.matrix() * n0.adjoint();
  }
  return out;
}

RateEvaluator lindblad_rhs(Matrix h, std::vector<Matrix> lindblad_ops) {
  const Eigen::Index dim = h.rows();
  if (h.cols() != dim) throw InvalidArgument("lindblad_rhs: H must be square");
  struct Jump {
    Matrix op;
    Matrix product;  // L^dag L
  };
  std::vector<Jump> jumps;
  jumps.reserve(lindblad_ops.size());
  for (Matrix& l : lindblad_ops) {
    if (l.rows() != dim || l.cols() != dim) {
      throw DimensionMismatch("lindblad_rhs: operator dimension mismatch");
    }
    Matrix product = l.adjoint() * l;
    jumps.push_back({std::move(l), std::move(product)});
  }
  return [h = std::move(h), jumps = std::move(jumps)](const Matrix& rho) {
    Matrix out = Complex(0.0, 1.0) * (rho * h - h * rho);
    for (const Jump& jump : jumps) {
      out += jump.op * rho * jump.op.adjoint();
      out -= 0.5 * (rho * jump.product + jump.product * rho);
    }
    return out;
  };
}

const Matrix& Trajectory::state_at(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-9) return states[i];
  }
  throw InvalidArgument("Trajectory: no snapshot at t = " + std::to_string(t));
}

Trajectory integrate_rates(const DensityMatrix& rho0, const RateEvaluator& rhs,
                           double t_final, double dt) {
  if (!(dt > 0)) throw InvalidArgument("integrate_rates: dt must be > 0");
  if (t_final < 0) throw InvalidArgument("integrate_rates: t_final must be >= 0");

  Trajectory trajectory;
  Matrix state = rho0.matrix();
  trajectory.times.push_back(0.0);
  trajectory.states.push_back(state);

  const auto full_steps = static_cast<long long>(std::floor(t_final / dt + 1e-9));
  const double remainder = t_final - static_cast<double>(full_steps) * dt;

  auto advance = [&](double h, double t) {
    const Matrix k1 = rhs(state);
    const Matrix k2 = rhs(state + (0.5 * h) * k1);
    const Matrix k3 = rhs(state + (0.5 * h) * k2);
    const Matrix k4 = rhs(state + h * k3);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!state.allFinite()) {
      throw NumericError("integrate_rates: non-finite state at t = " +
                         std::to_string(t));
    }
    trajectory.times.push_back(t);
    trajectory.states.push_back(state);
  };

  for (long long step = 1; step <= full_steps; ++step) {
    advance(dt, static_cast<double>(step) * dt);
  }
  if (remainder > 1e-12) {
    advance(remainder, t_final);
  }
  return trajectory;
}

Eigen::MatrixXd damping_landscape(DampingPanel panel, double omega,
                                  double kappa, double phi,
                                  const std::vector<double>& thetas,
                                  const std::vector<double>& times,
                                  const EstimationMode& mode,
                                  GridComponent component) {
  if (thetas.empty() || times.empty()) {
    throw InvalidArgument("damping_landscape: empty grid");
  }
  const Matrix h = (-omega / 2.0) * pauli_z();
  const WeightedPauliSum h_sum = pauli_decompose(h);
  const LindbladChannel channel = damping_channel(kappa);
  const WeightedPauliSum identity = WeightedPauliSum::identity(1);
  const Matrix x_gate = pauli_x();

  const auto pick = [component](Complex v) {
    switch (component) {
      case GridComponent::Real: return v.real();
      case GridComponent::Imag: return v.imag();
      case GridComponent::Abs: return std::abs(v);
    }
    return v.real();
  };

  const std::size_t nt = times.size();
  Eigen::MatrixXd grid(thetas.size(), nt);
  parallel_for(static_cast<std::int64_t>(thetas.size() * nt),
               [&](std::int64_t task) {
                 const std::size_t i = task / nt;
                 const std::size_t j = task % nt;
                 const RhoPrep rho{StateVector::bloch(thetas[i], phi),
                                   HamiltonianEvolution{h, times[j]}};
                 const EstimationMode cell_mode =
                     mode.child(static_cast<std::uint64_t>(task));
                 Complex value;
                 switch (panel) {
                   case DampingPanel::UnitaryOffdiagonal:
                     value = commutator_element(rho, StateVector::basis(1, 0),
                                                x_gate, h_sum, cell_mode)
                                 .value;
                     break;
                   case DampingPanel::JumpDiagonal:
                     value = first_term_element(rho, StateVector::basis(1, 0),
                                                channel, 0,
                                                identity_matrix(2), cell_mode)
                                 .value;
                     break;
                   case DampingPanel::AnticommutatorDiagonal:
                     value = -0.5 * second_term_element(
                                        rho, StateVector::basis(1, 1), channel,
                                        0, identity_matrix(2), cell_mode)
                                        .value;
                     break;
                   case DampingPanel::AnticommutatorOffdiagonal:
                     if (channel.ops()[0].is_zero()) {
                       value = 0.0;
                     } else {
                       value = -matrix_element(rho, StateVector::basis(1, 0),
                                               identity,
                                               channel.ops()[0].product_sum,
                                               x_gate, cell_mode)
                                    .value;
                     }
                     break;
                 }
                 grid(i, j) = pick(value);
               });
  return grid;
}

}  // namespace commsim
