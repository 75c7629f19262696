#pragma once

#include <cstdint>

#include "core/circuit.hpp"
#include "core/pauli.hpp"

namespace commsim {

// Exact evaluation or finite-shot ensemble measurement of the control qubit.
struct EstimationMode {
  enum class Kind { Exact, Sampled };
  Kind kind = Kind::Exact;
  long long shots = 0;
  std::uint64_t seed = 0;

  static EstimationMode exact() { return {}; }
  static EstimationMode sampled(long long shots, std::uint64_t seed);

  bool is_sampled() const { return kind == Kind::Sampled; }

  // Independent child seed; keeps multi-call operations (rate matrices,
  // element combinations) reproducible without reusing shot streams.
  EstimationMode child(std::uint64_t salt) const;
};

// How a sampled-mode shot budget is spread over decomposition terms.
enum class ShotAllocation { EvenSplit, WeightedByCoeff };

struct EstimationResult {
  Complex value{0.0, 0.0};
  double std_error = 0.0;  // 0 in exact mode
  long long shots_used = 0;
  // Number of per-term circuit evaluations behind this value (a single
  // decomposition pass counts |n_sum| * |m_sum|).
  int terms_evaluated = 0;
};

// The density operator rho(t) as the estimators see it: a pure initial
// state plus the evolution applied before the controlled gates.
struct RhoPrep {
  StateVector psi0;
  Evolution evolution;
};

// <Z> of the control qubit for one fully specified circuit. Exact mode
// returns p0 - p1; sampled mode draws `shots` Bernoulli(p0) outcomes and
// returns the empirical estimate with std_error = 2 sqrt(p0_hat p1_hat /
// shots). Sampled mode rejects non-unitary controlled operators.
EstimationResult z_expectation(const CommutationCircuitSpec& spec,
                               const EstimationMode& mode);

// <Phi| Z^chi_A |Phi> for N and M given as Pauli decompositions. Complex
// coefficients are absorbed into the control angle: a term pair (c_j, d_k)
// contributes weight |c_j||d_k| at chi + arg(c_j) + arg(d_k). Summation
// order is fixed by term index, so results are reproducible regardless of
// any caller-side concurrency.
EstimationResult zchi_expectation(const RhoPrep& rho, const StateVector& phi,
                                  const WeightedPauliSum& n_sum,
                                  const WeightedPauliSum& m_sum,
                                  const Matrix& a_op, double chi,
                                  const EstimationMode& mode,
                                  ShotAllocation allocation = ShotAllocation::EvenSplit);

// i <Phi| [rho(t), M] |Phi> = 2 <Phi| Z^{pi/2}_1 |Phi>. Real for Hermitian
// M; rejects m_sum with imaginary coefficients beyond 1e-10.
EstimationResult commutator_expectation(const RhoPrep& rho,
                                        const StateVector& phi,
                                        const WeightedPauliSum& m_sum,
                                        const EstimationMode& mode,
                                        ShotAllocation allocation = ShotAllocation::EvenSplit);

// <Phi| {rho(t), M} |Phi> = 2 <Phi| Z^0_1 |Phi>, same contract as
// commutator_expectation.
EstimationResult anticommutator_expectation(const RhoPrep& rho,
                                            const StateVector& phi,
                                            const WeightedPauliSum& m_sum,
                                            const EstimationMode& mode,
                                            ShotAllocation allocation = ShotAllocation::EvenSplit);

// <Phi| N rho(t) M |Phi'> for |Phi'> = A|Phi>, reconstructed as
// <Z^0_A> - i <Z^{pi/2}_A>. A must be unitary.
EstimationResult matrix_element(const RhoPrep& rho, const StateVector& phi,
                                const WeightedPauliSum& n_sum,
                                const WeightedPauliSum& m_sum,
                                const Matrix& a_op, const EstimationMode& mode,
                                ShotAllocation allocation = ShotAllocation::EvenSplit);

// i <Phi| [rho(t), M] |Phi'> for |Phi'> = A|Phi>, combined from the four
// Z expectations (two chi values on each side of the commutator).
EstimationResult commutator_element(const RhoPrep& rho, const StateVector& phi,
                                    const Matrix& a_op,
                                    const WeightedPauliSum& m_sum,
                                    const EstimationMode& mode,
                                    ShotAllocation allocation = ShotAllocation::EvenSplit);

}  // namespace commsim
