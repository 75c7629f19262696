#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "core/circuit.hpp"
#include "core/errors.hpp"
#include "core/operators.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace commsim;
using test::closed_form_probabilities;
using test::dense_rho;
using test::dense_zchi;
using test::final_state_closed_form;
using test::max_abs_diff;
using test::random_state;
using test::random_unitary;

namespace {

Vector evolve_state(const StateVector& psi0, const Matrix& h, double t) {
  return evolve_unitary(h, t) * psi0.amplitudes();
}

CommutationCircuitSpec random_unitary_spec(std::mt19937_64& rng, int L,
                                           double chi) {
  const Eigen::Index dim = dim_for_qubits(L);
  CommutationCircuitSpec spec{
      .num_system_qubits = L,
      .chi = chi,
      .psi0 = random_state(rng, L),
      .phi = random_state(rng, L),
      .evolution = HamiltonianEvolution{test::random_hermitian(rng, dim),
                                        0.1 + 0.8 * (rng() % 100) / 100.0},
      .op_n = random_unitary(rng, dim),
      .op_a = random_unitary(rng, dim),
      .op_m = random_unitary(rng, dim),
  };
  return spec;
}

}  // namespace

TEST_CASE("identical branches with identity operators") {
  std::mt19937_64 rng(31);
  const StateVector psi = random_state(rng, 2);
  const auto spec =
      CommutationCircuitSpec::with_identities(psi, psi, identity_matrix(4), 0.0);
  const FinalState final_state = run_circuit(spec);

  // |+> (x) |psi> (x) |psi>
  const Vector expected = final_state_closed_form(
      psi.amplitudes(), psi.amplitudes(), identity_matrix(4),
      identity_matrix(4), identity_matrix(4), 0.0);
  CHECK(max_abs_diff(final_state.raw, expected) < 1e-12);
}

TEST_CASE("single-qubit branch structure by hand") {
  const double omega = -2.0, t = 0.6, chi = 0.9;
  const Matrix h = (-omega / 2.0) * pauli_z();
  CommutationCircuitSpec spec = CommutationCircuitSpec::with_identities(
      StateVector::basis(1, 0), StateVector::basis(1, 1),
      HamiltonianEvolution{h, t}, chi);
  const FinalState final_state = run_circuit(spec);

  // psi(t) = e^{i omega t / 2} |0>; amplitude layout: index = c*4 + m*2 + s.
  const Complex phase = std::exp(Complex(0.0, omega * t / 2.0));
  const Complex echi = std::exp(Complex(0.0, chi));
  Vector expected = Vector::Zero(8);
  const double half = 0.5;
  expected[0b010] = half * phase;          // |0>_C |1>_M |0>_S
  expected[0b110] = half * phase;          // |1>_C |1>_M |0>_S
  expected[0b001] = half * echi * phase;   // |0>_C |0 = N psi(t)>_M |1 = MA phi>_S
  expected[0b101] = -half * echi * phase;  // |-> sign on the second branch
  CHECK(max_abs_diff(final_state.raw, expected) < 1e-12);
}

TEST_CASE("gate-level run matches the closed-form final state") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 50; ++i) {
    const int L = 1 + static_cast<int>(i % 2);
    const auto spec = random_unitary_spec(rng, L, -1.5 + 0.07 * i);
    const FinalState final_state = run_circuit(spec);

    const auto& he = std::get<HamiltonianEvolution>(spec.evolution);
    const Vector psi_t = evolve_state(spec.psi0, he.hamiltonian, he.time);
    const Vector expected =
        final_state_closed_form(psi_t, spec.phi.amplitudes(), spec.op_n,
                                spec.op_a, spec.op_m, spec.chi);
    CHECK(max_abs_diff(final_state.raw, expected) < 1e-12);
    CHECK(std::abs(final_state.raw.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("non-unitary operators evaluate as raw linear maps") {
  std::mt19937_64 rng(33);
  const auto psi = random_state(rng, 1);
  const auto phi = random_state(rng, 1);
  const Matrix n = test::random_matrix(rng, 2);
  const Matrix m = test::random_matrix(rng, 2);
  CommutationCircuitSpec spec =
      CommutationCircuitSpec::with_identities(psi, phi, identity_matrix(2), 0.4);
  spec.op_n = n;
  spec.op_m = m;
  const FinalState final_state = run_circuit(spec);
  const Vector expected = final_state_closed_form(
      psi.amplitudes(), phi.amplitudes(), n, identity_matrix(2), m, 0.4);
  CHECK(max_abs_diff(final_state.raw, expected) < 1e-12);

  spec.physical = true;
  CHECK_THROWS_AS(run_circuit(spec), InvalidArgument);
}

TEST_CASE("control probabilities on the worked cases") {
  std::mt19937_64 rng(34);
  const StateVector psi = random_state(rng, 2);
  const auto aligned =
      CommutationCircuitSpec::with_identities(psi, psi, identity_matrix(4), 0.0);
  const auto [p0a, p1a] = control_probabilities(run_circuit(aligned));
  CHECK(std::abs(p0a - 1.0) < 1e-12);
  CHECK(std::abs(p1a) < 1e-12);

  // Orthogonal reference: P0 = P1 = 1/2.
  const auto orthogonal = CommutationCircuitSpec::with_identities(
      StateVector::basis(2, 1), StateVector::basis(2, 2), identity_matrix(4),
      0.0);
  const auto [p0b, p1b] = control_probabilities(run_circuit(orthogonal));
  CHECK(std::abs(p0b - 0.5) < 1e-12);
  CHECK(std::abs(p1b - 0.5) < 1e-12);
}

TEST_CASE("p0 - p1 equals the dense Z^chi_A read-out") {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 100; ++i) {
    const int L = 1 + static_cast<int>(i % 3);
    const auto spec = random_unitary_spec(rng, L, -3.0 + 0.06 * i);
    const auto [p0, p1] = control_probabilities(run_circuit(spec));

    const auto& he = std::get<HamiltonianEvolution>(spec.evolution);
    const Matrix rho = dense_rho(spec.psi0.amplitudes(), he.hamiltonian, he.time);
    const double expected = dense_zchi(rho, spec.phi.amplitudes(), spec.op_n,
                                       spec.op_m, spec.op_a, spec.chi);
    CHECK(std::abs((p0 - p1) - expected) < 1e-10);
    CHECK(std::abs(p0 + p1 - 1.0) < 1e-12);

    const Vector psi_t = evolve_state(spec.psi0, he.hamiltonian, he.time);
    const auto [q0, q1] = closed_form_probabilities(
        psi_t, spec.phi.amplitudes(), spec.op_n, spec.op_a, spec.op_m, spec.chi);
    CHECK(std::abs(p0 - q0) < 1e-12);
    CHECK(std::abs(p1 - q1) < 1e-12);
  }
}

TEST_CASE("chi is 2pi periodic") {
  std::mt19937_64 rng(36);
  for (int i = 0; i < 200; ++i) {
    const auto spec = random_unitary_spec(rng, 1 + static_cast<int>(i % 2),
                                          -2.0 + 0.02 * i);
    auto shifted = spec;
    shifted.chi = spec.chi + 2.0 * std::numbers::pi;
    const auto [p0, p1] = control_probabilities(run_circuit(spec));
    const auto [q0, q1] = control_probabilities(run_circuit(shifted));
    CHECK(std::abs((p0 - p1) - (q0 - q1)) < 1e-12);
  }
}

TEST_CASE("control preparation yields (|0> + e^{i chi}|1>)/sqrt(2)") {
  const double chi = 1.234;
  RawVector state = Vector::Zero(2);
  state[0] = 1.0;
  apply_single_qubit_gate(state, hadamard_gate(), 0);
  apply_single_qubit_gate(state, phase_gate(chi), 0);
  Vector expected(2);
  expected << 1.0 / std::sqrt(2.0),
      std::exp(Complex(0.0, chi)) / std::sqrt(2.0);
  CHECK(max_abs_diff(state, expected) < 1e-12);
}

TEST_CASE("block controlled-SWAP") {
  const RegisterLayout layout = RegisterLayout::standard(2);

  SECTION("control-0 subspace is untouched, basis pairs exchange") {
    std::mt19937_64 rng(37);
    const StateVector any = random_state(rng, 5);
    const RawVector swapped = block_cswap(any.amplitudes(), layout);
    for (Eigen::Index idx = 0; idx < 16; ++idx) {
      CHECK(swapped[idx] == any.amplitudes()[idx]);
    }
    // |1>_C |a>_S |b>_M -> |1>_C |b>_S |a>_M; with S low bits and M high:
    // index 1*16 + b*4 + a -> 1*16 + a*4 + b.
    for (Eigen::Index a = 0; a < 4; ++a) {
      for (Eigen::Index b = 0; b < 4; ++b) {
        CHECK(swapped[16 + b * 4 + a] == any.amplitudes()[16 + a * 4 + b]);
      }
    }
  }

  SECTION("involution holds exactly on random vectors") {
    std::mt19937_64 rng(38);
    for (int i = 0; i < 200; ++i) {
      const StateVector v = random_state(rng, 5);
      const RawVector twice =
          block_cswap(block_cswap(v.amplitudes(), layout), layout);
      CHECK(max_abs_diff(twice, v.amplitudes()) == 0.0);
    }
  }
}

TEST_CASE("apply_controlled basics") {
  const std::vector<int> targets{0};

  // controlled-I leaves any state alone.
  std::mt19937_64 rng(39);
  const StateVector v = random_state(rng, 2);
  CHECK(max_abs_diff(apply_controlled(v.amplitudes(), identity_matrix(2),
                                      targets, 1),
                     v.amplitudes()) == 0.0);

  // control in |0>: nothing happens.
  RawVector zero_control = Vector::Zero(4);
  zero_control[0b01] = 1.0;  // control bit (qubit 1) is 0
  const RawVector after =
      apply_controlled(zero_control, pauli_x(), targets, 1);
  CHECK(max_abs_diff(after, zero_control) == 0.0);

  // controlled-X on |1>_C |0>_S -> |1>_C |1>_S.
  RawVector basis = Vector::Zero(4);
  basis[0b10] = 1.0;
  const RawVector flipped = apply_controlled(basis, pauli_x(), targets, 1);
  RawVector expected = Vector::Zero(4);
  expected[0b11] = 1.0;
  CHECK(max_abs_diff(flipped, expected) == 0.0);

  CHECK_THROWS_AS(apply_controlled(basis, pauli_x(), {1}, 1), InvalidArgument);
}

TEST_CASE("custom register layouts give the same read-out") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    auto spec = random_unitary_spec(rng, 2, 0.3 + 0.1 * i);

    RegisterLayout layout;
    layout.control_index = 0;  // control on the least significant qubit
    layout.system_indices = {3, 1};
    layout.reference_indices = {2, 4};
    auto relabeled = spec;
    relabeled.layout = layout;

    const auto [p0, p1] = control_probabilities(run_circuit(spec));
    const auto [q0, q1] = control_probabilities(run_circuit(relabeled));
    CHECK(std::abs(p0 - q0) < 1e-12);
    CHECK(std::abs(p1 - q1) < 1e-12);
  }

  RegisterLayout clash;
  clash.control_index = 1;
  clash.system_indices = {0};
  clash.reference_indices = {1};
  CHECK_THROWS_AS(clash.validate(), InvalidArgument);
}

TEST_CASE("circuit validation rejects bad specs") {
  std::mt19937_64 rng(40);
  auto spec = CommutationCircuitSpec::with_identities(
      random_state(rng, 1), random_state(rng, 1), identity_matrix(2), 0.0);
  spec.op_n = identity_matrix(4);
  CHECK_THROWS_AS(run_circuit(spec), DimensionMismatch);

  auto bad_evolution = CommutationCircuitSpec::with_identities(
      random_state(rng, 1), random_state(rng, 1),
      (2.0 * identity_matrix(2)).eval(), 0.0);
  CHECK_THROWS_AS(run_circuit(bad_evolution), InvalidArgument);
}
