#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "core/state.hpp"
#include "core/types.hpp"

namespace commsim {

// Qubit assignment for the 2L+1-qubit simulator register. Little-endian
// throughout: qubit k is bit k of the amplitude index.
struct RegisterLayout {
  int control_index = 0;
  std::vector<int> system_indices;
  std::vector<int> reference_indices;

  // Control on top: S = [0, L), M = [L, 2L), C = 2L.
  static RegisterLayout standard(int num_system_qubits);

  int num_system_qubits() const {
    return static_cast<int>(system_indices.size());
  }
  int total_qubits() const { return 2 * num_system_qubits() + 1; }

  // All 2L+1 indices distinct, |S| == |M| == L.
  void validate() const;
};

struct HamiltonianEvolution {
  Matrix hamiltonian;
  double time = 0.0;
};

// Either exp(-iHt) built from a Hamiltonian, or an explicit unitary.
using Evolution = std::variant<HamiltonianEvolution, Matrix>;

// Turns the evolution description into the dense unitary the circuit
// applies to the system register. Explicit matrices are checked for
// unitarity within 1e-10.
Matrix evolution_unitary(const Evolution& evolution, Eigen::Index dim);

// One instance of the commutation circuit: control preparation angle chi,
// system state psi0 evolved under `evolution`, reference state phi, and the
// three controlled operators. N/A/M need not be unitary unless `physical`
// is set, in which case non-unitary operators are rejected.
struct CommutationCircuitSpec {
  int num_system_qubits = 1;
  double chi = 0.0;
  StateVector psi0;
  StateVector phi;
  Evolution evolution;
  Matrix op_n;
  Matrix op_a;
  Matrix op_m;
  bool physical = false;
  RegisterLayout layout;  // empty -> standard(num_system_qubits)

  static CommutationCircuitSpec with_identities(StateVector psi0,
                                                StateVector phi,
                                                Evolution evolution,
                                                double chi);

  void validate() const;
};

// Output of the circuit, possibly unnormalised when the controlled
// operators are not unitary.
struct FinalState {
  RawVector raw;
  RegisterLayout layout;
};

// Statevector kernels. All mutate the buffer in place under exclusive
// ownership.
void apply_single_qubit_gate(RawVector& state, const Matrix& gate, int qubit);
void apply_register_operator(RawVector& state, const Matrix& op,
                             const std::vector<int>& targets);
void apply_controlled_operator(RawVector& state, const Matrix& op,
                               const std::vector<int>& targets, int control);
void apply_block_cswap(RawVector& state, const RegisterLayout& layout);

// Value-returning forms matching the module contracts.
RawVector block_cswap(const RawVector& state, const RegisterLayout& layout);
RawVector apply_controlled(const RawVector& state, const Matrix& op,
                           const std::vector<int>& targets, int control);

// Executes the full protocol gate by gate: control Hadamard, R(chi), U(t)
// on S, controlled-N on S, controlled-A then controlled-M on M, block
// controlled-SWAP, final control Hadamard.
FinalState run_circuit(const CommutationCircuitSpec& spec);

// (p0, p1): squared-magnitude mass of the control-0 / control-1 subspaces.
// Genuine probabilities when the circuit operators are unitary.
std::pair<double, double> control_probabilities(const FinalState& final_state);

}  // namespace commsim
