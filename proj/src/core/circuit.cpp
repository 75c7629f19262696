#include "core/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/errors.hpp"
#include "core/operators.hpp"

namespace commsim {

namespace {

constexpr int kMaxSystemQubits = 12;  // dense 2^(2L+1) statevector bound

Eigen::Index place_bits(Eigen::Index value, const std::vector<int>& positions) {
  Eigen::Index out = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if ((value >> i) & 1) out |= Eigen::Index{1} << positions[i];
  }
  return out;
}

void require_qubit_in_range(int qubit, Eigen::Index dim, const char* what) {
  if (qubit < 0 || (Eigen::Index{1} << (qubit + 1)) > dim) {
    throw InvalidArgument(std::string(what) + ": qubit index " +
                          std::to_string(qubit) + " out of range");
  }
}

}  // namespace

RegisterLayout RegisterLayout::standard(int num_system_qubits) {
  RegisterLayout layout;
  layout.system_indices.resize(num_system_qubits);
  layout.reference_indices.resize(num_system_qubits);
  for (int i = 0; i < num_system_qubits; ++i) {
    layout.system_indices[i] = i;
    layout.reference_indices[i] = num_system_qubits + i;
  }
  layout.control_index = 2 * num_system_qubits;
  return layout;
}

void RegisterLayout::validate() const {
  if (system_indices.empty() ||
      system_indices.size() != reference_indices.size()) {
    throw InvalidArgument("RegisterLayout: |system| and |reference| must be equal and nonzero");
  }
  std::set<int> seen;
  seen.insert(control_index);
  for (int q : system_indices) seen.insert(q);
  for (int q : reference_indices) seen.insert(q);
  const int total = total_qubits();
  if (static_cast<int>(seen.size()) != total) {
    throw InvalidArgument("RegisterLayout: qubit indices must be distinct");
  }
  for (int q : seen) {
    if (q < 0 || q >= total) {
      throw InvalidArgument("RegisterLayout: qubit index " + std::to_string(q) +
                            " outside [0, " + std::to_string(total) + ")");
    }
  }
}

Matrix evolution_unitary(const Evolution& evolution, Eigen::Index dim) {
  if (const auto* he = std::get_if<HamiltonianEvolution>(&evolution)) {
    if (he->hamiltonian.rows() != dim || he->hamiltonian.cols() != dim) {
      throw DimensionMismatch("evolution: Hamiltonian dimension mismatch");
    }
    if (!std::isfinite(he->time)) {
      throw InvalidArgument("evolution: non-finite time");
    }
    return evolve_unitary(he->hamiltonian, he->time);
  }
  const Matrix& u = std::get<Matrix>(evolution);
  if (u.rows() != dim || u.cols() != dim) {
    throw DimensionMismatch("evolution: unitary dimension mismatch");
  }
  if (!is_unitary(u, kUnitaryTolerance)) {
    throw InvalidArgument("evolution: explicit evolution matrix is not unitary");
  }
  return u;
}

CommutationCircuitSpec CommutationCircuitSpec::with_identities(
    StateVector psi0, StateVector phi, Evolution evolution, double chi) {
  const int L = psi0.num_qubits();
  const Eigen::Index dim = dim_for_qubits(L);
  CommutationCircuitSpec spec{
      .num_system_qubits = L,
      .chi = chi,
      .psi0 = std::move(psi0),
      .phi = std::move(phi),
      .evolution = std::move(evolution),
      .op_n = Matrix::Identity(dim, dim),
      .op_a = Matrix::Identity(dim, dim),
      .op_m = Matrix::Identity(dim, dim),
  };
  return spec;
}

void CommutationCircuitSpec::validate() const {
  if (num_system_qubits < 1 || num_system_qubits > kMaxSystemQubits) {
    throw InvalidArgument("circuit: system size must be in [1, " +
                          std::to_string(kMaxSystemQubits) + "] qubits");
  }
  if (!std::isfinite(chi)) throw InvalidArgument("circuit: non-finite chi");
  const Eigen::Index dim = dim_for_qubits(num_system_qubits);
  if (psi0.num_qubits() != num_system_qubits ||
      phi.num_qubits() != num_system_qubits) {
    throw DimensionMismatch("circuit: psi0/phi register size mismatch");
  }
  for (const Matrix* op : {&op_n, &op_a, &op_m}) {
    if (op->rows() != dim || op->cols() != dim) {
      throw DimensionMismatch("circuit: controlled operator dimension mismatch");
    }
    if (!op->allFinite()) {
      throw InvalidArgument("circuit: non-finite controlled operator");
    }
  }
  if (physical) {
    if (!is_unitary(op_n) || !is_unitary(op_a) || !is_unitary(op_m)) {
      throw InvalidArgument(
          "circuit: physical mode requires unitary N, A, M operators");
    }
  }
  if (!layout.system_indices.empty()) {
    if (layout.num_system_qubits() != num_system_qubits) {
      throw InvalidArgument("circuit: layout register size mismatch");
    }
    layout.validate();
  }
}

void apply_single_qubit_gate(RawVector& state, const Matrix& gate, int qubit) {
  if (gate.rows() != 2 || gate.cols() != 2) {
    throw DimensionMismatch("apply_single_qubit_gate: gate must be 2x2");
  }
  require_qubit_in_range(qubit, state.size(), "apply_single_qubit_gate");
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  const Complex g00 = gate(0, 0), g01 = gate(0, 1);
  const Complex g10 = gate(1, 0), g11 = gate(1, 1);
  for (Eigen::Index idx = 0; idx < state.size(); ++idx) {
    if (idx & bit) continue;
    const Complex a0 = state[idx];
    const Complex a1 = state[idx | bit];
    state[idx] = g00 * a0 + g01 * a1;
    state[idx | bit] = g10 * a0 + g11 * a1;
  }
}

void apply_controlled_operator(RawVector& state, const Matrix& op,
                               const std::vector<int>& targets, int control) {
  const int k = static_cast<int>(targets.size());
  const Eigen::Index fiber_dim = Eigen::Index{1} << k;
  if (op.rows() != fiber_dim || op.cols() != fiber_dim) {
    throw DimensionMismatch("apply_controlled: operator dimension " +
                            std::to_string(op.rows()) + " does not match " +
                            std::to_string(k) + " target qubits");
  }
  Eigen::Index target_mask = 0;
  for (int t : targets) {
    require_qubit_in_range(t, state.size(), "apply_controlled");
    const Eigen::Index bit = Eigen::Index{1} << t;
    if (target_mask & bit) {
      throw InvalidArgument("apply_controlled: duplicate target qubit");
    }
    if (t == control) {
      throw InvalidArgument("apply_controlled: control overlaps targets");
    }
    target_mask |= bit;
  }
  Eigen::Index control_bit = 0;
  if (control >= 0) {
    require_qubit_in_range(control, state.size(), "apply_controlled");
    control_bit = Eigen::Index{1} << control;
  }

  std::vector<Eigen::Index> offsets(fiber_dim);
  for (Eigen::Index f = 0; f < fiber_dim; ++f) {
    Eigen::Index off = 0;
    for (int i = 0; i < k; ++i) {
      if ((f >> i) & 1) off |= Eigen::Index{1} << targets[i];
    }
    offsets[f] = off;
  }

  Vector fiber(fiber_dim), transformed(fiber_dim);
  for (Eigen::Index base = 0; base < state.size(); ++base) {
    if (base & target_mask) continue;
    if (control >= 0 && !(base & control_bit)) continue;
    for (Eigen::Index f = 0; f < fiber_dim; ++f) fiber[f] = state[base + offsets[f]];
    transformed.noalias() = op * fiber;
    for (Eigen::Index f = 0; f < fiber_dim; ++f) state[base + offsets[f]] = transformed[f];
  }
}

void apply_register_operator(RawVector& state, const Matrix& op,
                             const std::vector<int>& targets) {
  apply_controlled_operator(state, op, targets, -1);
}

void apply_block_cswap(RawVector& state, const RegisterLayout& layout) {
  const int L = layout.num_system_qubits();
  const Eigen::Index control_bit = Eigen::Index{1} << layout.control_index;
  for (Eigen::Index idx = 0; idx < state.size(); ++idx) {
    if (!(idx & control_bit)) continue;
    Eigen::Index partner = idx;
    for (int i = 0; i < L; ++i) {
      const bool sb = (idx >> layout.system_indices[i]) & 1;
      const bool mb = (idx >> layout.reference_indices[i]) & 1;
      if (sb != mb) {
        partner ^= (Eigen::Index{1} << layout.system_indices[i]) |
                   (Eigen::Index{1} << layout.reference_indices[i]);
      }
    }
    if (partner > idx) std::swap(state[idx], state[partner]);
  }
}

RawVector block_cswap(const RawVector& state, const RegisterLayout& layout) {
  layout.validate();
  if (state.size() != (Eigen::Index{1} << layout.total_qubits())) {
    throw DimensionMismatch("block_cswap: state dimension mismatch");
  }
  RawVector out = state;
  apply_block_cswap(out, layout);
  return out;
}

RawVector apply_controlled(const RawVector& state, const Matrix& op,
                           const std::vector<int>& targets, int control) {
  RawVector out = state;
  apply_controlled_operator(out, op, targets, control);
  return out;
}

FinalState run_circuit(const CommutationCircuitSpec& spec) {
  spec.validate();
  const RegisterLayout layout = spec.layout.system_indices.empty()
                                    ? RegisterLayout::standard(spec.num_system_qubits)
                                    : spec.layout;
  layout.validate();

  const Eigen::Index reg_dim = dim_for_qubits(spec.num_system_qubits);
  const Eigen::Index total_dim = Eigen::Index{1} << layout.total_qubits();

  // |0>_C (x) |psi0>_S (x) |Phi>_M
  RawVector state = Vector::Zero(total_dim);
  const Vector& psi0 = spec.psi0.amplitudes();
  const Vector& phi = spec.phi.amplitudes();
  for (Eigen::Index s = 0; s < reg_dim; ++s) {
    if (psi0[s] == Complex(0.0, 0.0)) continue;
    const Eigen::Index s_part = place_bits(s, layout.system_indices);
    for (Eigen::Index m = 0; m < reg_dim; ++m) {
      if (phi[m] == Complex(0.0, 0.0)) continue;
      state[s_part + place_bits(m, layout.reference_indices)] = psi0[s] * phi[m];
    }
  }

  apply_single_qubit_gate(state, hadamard_gate(), layout.control_index);
  apply_single_qubit_gate(state, phase_gate(spec.chi), layout.control_index);

  const Matrix u = evolution_unitary(spec.evolution, reg_dim);
  apply_register_operator(state, u, layout.system_indices);

  apply_controlled_operator(state, spec.op_n, layout.system_indices,
                            layout.control_index);
  apply_controlled_operator(state, spec.op_a, layout.reference_indices,
                            layout.control_index);
  apply_controlled_operator(state, spec.op_m, layout.reference_indices,
                            layout.control_index);

  apply_block_cswap(state, layout);
  apply_single_qubit_gate(state, hadamard_gate(), layout.control_index);

  return {std::move(state), layout};
}

std::pair<double, double> control_probabilities(const FinalState& final_state) {
  const Eigen::Index control_bit = Eigen::Index{1}
                                   << final_state.layout.control_index;
  double p0 = 0.0, p1 = 0.0;
  for (Eigen::Index idx = 0; idx < final_state.raw.size(); ++idx) {
    const double w = std::norm(final_state.raw[idx]);
    if (idx & control_bit) {
      p1 += w;
    } else {
      p0 += w;
    }
  }
  return {p0, p1};
}

}  // namespace commsim
