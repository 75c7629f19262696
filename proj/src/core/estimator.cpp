#include "core/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/operators.hpp"
#include "core/rng.hpp"

namespace commsim {

namespace {

EstimationResult run_one_circuit(const CommutationCircuitSpec& spec,
                                 const EstimationMode& mode, long long shots,
                                 std::uint64_t stream) {
  CommutationCircuitSpec staged = spec;
  staged.physical = mode.is_sampled();  // real measurements need unitaries
  const auto [p0, p1] = control_probabilities(run_circuit(staged));

  if (!mode.is_sampled()) {
    return {Complex(p0 - p1, 0.0), 0.0, 0, 1};
  }

  const double prob = std::clamp(p0, 0.0, 1.0);
  SplitMix64 rng(derive_stream(mode.seed, stream));
  long long zeros = 0;
  for (long long s = 0; s < shots; ++s) {
    if (rng.uniform() < prob) ++zeros;
  }
  const double p0_hat = static_cast<double>(zeros) / static_cast<double>(shots);
  const double p1_hat = 1.0 - p0_hat;
  const double std_error = 2.0 * std::sqrt(p0_hat * p1_hat / static_cast<double>(shots));
  return {Complex(p0_hat - p1_hat, 0.0), std_error, shots, 1};
}

// Decomposition-driven Z^chi_A estimate with a caller-controlled stream
// window so composite operations can keep shot streams disjoint.
EstimationResult zchi_impl(const RhoPrep& rho, const StateVector& phi,
                           const WeightedPauliSum& n_sum,
                           const WeightedPauliSum& m_sum, const Matrix& a_op,
                           double chi, const EstimationMode& mode,
                           ShotAllocation allocation, std::uint64_t stream_base) {
  if (n_sum.empty() || m_sum.empty()) {
    throw InvalidArgument("zchi_expectation: empty decomposition");
  }
  const int L = rho.psi0.num_qubits();
  const Eigen::Index dim = dim_for_qubits(L);
  if (phi.num_qubits() != L || n_sum.num_qubits() != L ||
      m_sum.num_qubits() != L) {
    throw DimensionMismatch("zchi_expectation: register sizes differ");
  }
  if (a_op.rows() != dim || a_op.cols() != dim) {
    throw DimensionMismatch("zchi_expectation: A operator dimension mismatch");
  }
  if (!is_unitary(a_op, kUnitaryTolerance)) {
    throw InvalidArgument("zchi_expectation: A operator must be unitary");
  }
  if (mode.is_sampled() && mode.shots < 1) {
    throw InvalidArgument("zchi_expectation: sampled mode needs shots >= 1");
  }

  // The evolution is shared by every term; realise it once and hand the
  // per-term circuits the explicit unitary.
  const Matrix u = evolution_unitary(rho.evolution, dim);

  const auto& n_terms = n_sum.terms();
  const auto& m_terms = m_sum.terms();
  const std::size_t total_terms = n_terms.size() * m_terms.size();

  double weight_sum = 0.0;
  if (allocation == ShotAllocation::WeightedByCoeff) {
    for (const auto& nt : n_terms) {
      for (const auto& mt : m_terms) {
        weight_sum += std::abs(nt.coeff) * std::abs(mt.coeff);
      }
    }
  }

  EstimationResult out;
  double variance = 0.0;
  std::size_t term_index = 0;
  for (const auto& nt : n_terms) {
    for (const auto& mt : m_terms) {
      const double weight = std::abs(nt.coeff) * std::abs(mt.coeff);
      const double shifted_chi =
          chi + std::arg(nt.coeff) + std::arg(mt.coeff);

      long long term_shots = 0;
      if (mode.is_sampled()) {
        if (allocation == ShotAllocation::EvenSplit) {
          term_shots = std::max<long long>(
              1, mode.shots / static_cast<long long>(total_terms));
        } else {
          term_shots = std::max<long long>(
              1, std::llround(static_cast<double>(mode.shots) * weight / weight_sum));
        }
      }

      CommutationCircuitSpec spec{
          .num_system_qubits = L,
          .chi = shifted_chi,
          .psi0 = rho.psi0,
          .phi = phi,
          .evolution = u,
          .op_n = nt.string.to_matrix(),
          .op_a = a_op,
          .op_m = mt.string.to_matrix(),
      };
      const EstimationResult term = run_one_circuit(
          spec, mode, term_shots, stream_base + term_index);

      out.value += weight * term.value;
      variance += weight * weight * term.std_error * term.std_error;
      out.shots_used += term.shots_used;
      ++term_index;
    }
  }
  out.std_error = std::sqrt(variance);
  out.terms_evaluated = static_cast<int>(total_terms);
  return out;
}

EstimationResult matrix_element_impl(const RhoPrep& rho, const StateVector& phi,
                                     const WeightedPauliSum& n_sum,
                                     const WeightedPauliSum& m_sum,
                                     const Matrix& a_op,
                                     const EstimationMode& mode,
                                     ShotAllocation allocation,
                                     std::uint64_t stream_base) {
  const std::uint64_t window = n_sum.size() * m_sum.size();
  const EstimationResult real_part = zchi_impl(
      rho, phi, n_sum, m_sum, a_op, 0.0, mode, allocation, stream_base);
  const EstimationResult imag_part = zchi_impl(
      rho, phi, n_sum, m_sum, a_op, std::numbers::pi / 2.0, mode, allocation,
      stream_base + window);

  EstimationResult out;
  out.value = real_part.value - Complex(0.0, 1.0) * imag_part.value;
  out.std_error = std::hypot(real_part.std_error, imag_part.std_error);
  out.shots_used = real_part.shots_used + imag_part.shots_used;
  out.terms_evaluated = real_part.terms_evaluated + imag_part.terms_evaluated;
  return out;
}

void require_hermitian_sum(const WeightedPauliSum& m_sum, const char* what) {
  if (!m_sum.is_hermitian(kHermitianTolerance)) {
    throw InvalidArgument(std::string(what) +
                          ": M must decompose a Hermitian operator "
                          "(imaginary coefficient beyond 1e-10)");
  }
}

}  // namespace

EstimationMode EstimationMode::sampled(long long shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("EstimationMode: shots must be >= 1");
  return {Kind::Sampled, shots, seed};
}

EstimationMode EstimationMode::child(std::uint64_t salt) const {
  EstimationMode derived = *this;
  derived.seed = derive_stream(seed, salt);
  return derived;
}

EstimationResult z_expectation(const CommutationCircuitSpec& spec,
                               const EstimationMode& mode) {
  if (mode.is_sampled() && mode.shots < 1) {
    throw InvalidArgument("z_expectation: sampled mode needs shots >= 1");
  }
  return run_one_circuit(spec, mode, mode.shots, 0);
}

EstimationResult zchi_expectation(const RhoPrep& rho, const StateVector& phi,
                                  const WeightedPauliSum& n_sum,
                                  const WeightedPauliSum& m_sum,
                                  const Matrix& a_op, double chi,
                                  const EstimationMode& mode,
                                  ShotAllocation allocation) {
  return zchi_impl(rho, phi, n_sum, m_sum, a_op, chi, mode, allocation, 0);
}

EstimationResult commutator_expectation(const RhoPrep& rho,
                                        const StateVector& phi,
                                        const WeightedPauliSum& m_sum,
                                        const EstimationMode& mode,
                                        ShotAllocation allocation) {
  require_hermitian_sum(m_sum, "commutator_expectation");
  const int L = rho.psi0.num_qubits();
  EstimationResult r = zchi_impl(rho, phi, WeightedPauliSum::identity(L), m_sum,
                                 identity_matrix(dim_for_qubits(L)),
                                 std::numbers::pi / 2.0, mode, allocation, 0);
  r.value *= 2.0;
  r.std_error *= 2.0;
  return r;
}

EstimationResult anticommutator_expectation(const RhoPrep& rho,
                                            const StateVector& phi,
                                            const WeightedPauliSum& m_sum,
                                            const EstimationMode& mode,
                                            ShotAllocation allocation) {
  require_hermitian_sum(m_sum, "anticommutator_expectation");
  const int L = rho.psi0.num_qubits();
  EstimationResult r = zchi_impl(rho, phi, WeightedPauliSum::identity(L), m_sum,
                                 identity_matrix(dim_for_qubits(L)), 0.0, mode,
                                 allocation, 0);
  r.value *= 2.0;
  r.std_error *= 2.0;
  return r;
}

EstimationResult matrix_element(const RhoPrep& rho, const StateVector& phi,
                                const WeightedPauliSum& n_sum,
                                const WeightedPauliSum& m_sum,
                                const Matrix& a_op, const EstimationMode& mode,
                                ShotAllocation allocation) {
  return matrix_element_impl(rho, phi, n_sum, m_sum, a_op, mode, allocation, 0);
}

EstimationResult commutator_element(const RhoPrep& rho, const StateVector& phi,
                                    const Matrix& a_op,
                                    const WeightedPauliSum& m_sum,
                                    const EstimationMode& mode,
                                    ShotAllocation allocation) {
  require_hermitian_sum(m_sum, "commutator_element");
  const int L = rho.psi0.num_qubits();
  const WeightedPauliSum identity = WeightedPauliSum::identity(L);
  const std::uint64_t window = 2 * identity.size() * m_sum.size();

  // i (<Phi| rho M |Phi'> - <Phi| M rho |Phi'>)
  const EstimationResult rho_m = matrix_element_impl(
      rho, phi, identity, m_sum, a_op, mode, allocation, 0);
  const EstimationResult m_rho = matrix_element_impl(
      rho, phi, m_sum, identity, a_op, mode, allocation, window);

  EstimationResult out;
  out.value = Complex(0.0, 1.0) * (rho_m.value - m_rho.value);
  out.std_error = std::hypot(rho_m.std_error, m_rho.std_error);
  out.shots_used = rho_m.shots_used + m_rho.shots_used;
  out.terms_evaluated = rho_m.terms_evaluated + m_rho.terms_evaluated;
  return out;
}

}  // namespace commsim
