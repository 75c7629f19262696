#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace commsim {

enum class PauliLetter { I, X, Y, Z };

char pauli_char(PauliLetter letter);

// Length-L word over {I, X, Y, Z}; word[q] acts on qubit q (little-endian).
class PauliString {
 public:
  explicit PauliString(std::vector<PauliLetter> word);

  static PauliString identity(int num_qubits);

  int num_qubits() const { return static_cast<int>(word_.size()); }
  PauliLetter letter(int qubit) const { return word_[qubit]; }
  const std::vector<PauliLetter>& word() const { return word_; }
  bool is_identity() const;

  // P|index> = phase * |flipped index>; O(L) per call.
  std::pair<Eigen::Index, Complex> apply_to_basis(Eigen::Index index) const;

  Matrix to_matrix() const;

  // Grammar fragment, e.g. "X0 Z2"; the all-identity word renders as "I".
  std::string label() const;

  bool operator==(const PauliString& other) const = default;

 private:
  std::vector<PauliLetter> word_;
};

struct PauliTerm {
  Complex coeff;
  PauliString string;
};

// Unitary decomposition of an operator: sum of coeff * PauliString. Terms
// are unique (duplicates merged on construction) and coefficients below the
// drop tolerance are removed.
class WeightedPauliSum {
 public:
  WeightedPauliSum(int num_qubits, std::vector<PauliTerm> terms,
                   double drop_tolerance = kDropTolerance);

  static WeightedPauliSum identity(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // True when every coefficient is real within tol, which for a Pauli basis
  // is equivalent to the reconstructed operator being Hermitian.
  bool is_hermitian(double tol = kHermitianTolerance) const;

 private:
  int num_qubits_;
  std::vector<PauliTerm> terms_;
};

// coeff(P) = Tr(P op) / 2^L. Throws when the dimension is not a power of
// two. Reconstruction of the result reproduces op within 1e-12 entrywise.
WeightedPauliSum pauli_decompose(const Matrix& op,
                                 double drop_tolerance = kDropTolerance);

Matrix pauli_reconstruct(const WeightedPauliSum& sum);

// Text grammar, one term per line:
//   <re>[+<im>j] <LETTER><qubit> [<LETTER><qubit> ...]
// e.g. "0.5 X0", "0.5j Y0", "-1.0 Z0 Z1"; the identity term is "<coeff> I".
// Duplicate strings across lines are merged. Errors name the offending
// token and line.
WeightedPauliSum parse_pauli_sum(std::string_view text, int num_qubits);

std::string format_pauli_sum(const WeightedPauliSum& sum);

}  // namespace commsim
