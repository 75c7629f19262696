#include "core/pauli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "core/errors.hpp"
#include "core/operators.hpp"

namespace commsim {

namespace {

const Matrix& letter_matrix(PauliLetter letter) {
  switch (letter) {
    case PauliLetter::I: return pauli_i();
    case PauliLetter::X: return pauli_x();
    case PauliLetter::Y: return pauli_y();
    case PauliLetter::Z: return pauli_z();
  }
  throw InvalidArgument("unknown Pauli letter");
}

std::string format_complex(Complex c) {
  char buf[80];
  if (c.imag() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%.17g", c.real());
  } else if (c.real() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%.17gj", c.imag());
  } else {
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gj", c.real(), c.imag());
  }
  return buf;
}

Complex parse_coefficient(const std::string& token, int line) {
  const char* begin = token.c_str();
  const char* tail = begin + token.size();
  char* cursor = nullptr;
  const double first = std::strtod(begin, &cursor);
  if (cursor == begin) {
    throw ParseError("malformed coefficient", token, line);
  }
  if (cursor == tail) return {first, 0.0};
  if (*cursor == 'j' && cursor + 1 == tail) return {0.0, first};
  if (*cursor == '+' || *cursor == '-') {
    char* cursor2 = nullptr;
    const double second = std::strtod(cursor, &cursor2);
    if (cursor2 != cursor && *cursor2 == 'j' && cursor2 + 1 == tail) {
      return {first, second};
    }
  }
  throw ParseError("malformed coefficient", token, line);
}

}  // namespace

char pauli_char(PauliLetter letter) {
  switch (letter) {
    case PauliLetter::I: return 'I';
    case PauliLetter::X: return 'X';
    case PauliLetter::Y: return 'Y';
    case PauliLetter::Z: return 'Z';
  }
  return '?';
}

PauliString::PauliString(std::vector<PauliLetter> word) : word_(std::move(word)) {
  if (word_.empty()) throw InvalidArgument("PauliString: empty word");
}

PauliString PauliString::identity(int num_qubits) {
  if (num_qubits < 1) throw InvalidArgument("PauliString: need at least one qubit");
  return PauliString(std::vector<PauliLetter>(num_qubits, PauliLetter::I));
}

bool PauliString::is_identity() const {
  for (PauliLetter l : word_) {
    if (l != PauliLetter::I) return false;
  }
  return true;
}

std::pair<Eigen::Index, Complex> PauliString::apply_to_basis(
    Eigen::Index index) const {
  Eigen::Index flipped = index;
  Complex phase(1.0, 0.0);
  for (int q = 0; q < num_qubits(); ++q) {
    const bool bit = (index >> q) & 1;
    switch (word_[q]) {
      case PauliLetter::I:
        break;
      case PauliLetter::X:
        flipped ^= Eigen::Index{1} << q;
        break;
      case PauliLetter::Y:
        flipped ^= Eigen::Index{1} << q;
        phase *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
        break;
      case PauliLetter::Z:
        if (bit) phase = -phase;
        break;
    }
  }
  return {flipped, phase};
}

Matrix PauliString::to_matrix() const {
  Matrix m = letter_matrix(word_.back());
  for (int q = num_qubits() - 2; q >= 0; --q) {
    m = kron(m, letter_matrix(word_[q]));
  }
  return m;
}

std::string PauliString::label() const {
  if (is_identity()) return "I";
  std::string out;
  for (int q = 0; q < num_qubits(); ++q) {
    if (word_[q] == PauliLetter::I) continue;
    if (!out.empty()) out += ' ';
    out += pauli_char(word_[q]);
    out += std::to_string(q);
  }
  return out;
}

WeightedPauliSum::WeightedPauliSum(int num_qubits, std::vector<PauliTerm> terms,
                                   double drop_tolerance)
    : num_qubits_(num_qubits) {
  if (num_qubits_ < 1) {
    throw InvalidArgument("WeightedPauliSum: need at least one qubit");
  }
  std::map<std::vector<PauliLetter>, Complex> merged;
  for (auto& term : terms) {
    if (term.string.num_qubits() != num_qubits_) {
      throw DimensionMismatch("WeightedPauliSum: term acts on " +
                              std::to_string(term.string.num_qubits()) +
                              " qubits, sum is over " +
                              std::to_string(num_qubits_));
    }
    if (!std::isfinite(term.coeff.real()) || !std::isfinite(term.coeff.imag())) {
      throw InvalidArgument("WeightedPauliSum: non-finite coefficient");
    }
    merged[term.string.word()] += term.coeff;
  }
  terms_.reserve(merged.size());
  for (auto& [word, coeff] : merged) {
    if (std::abs(coeff) < drop_tolerance) continue;
    terms_.push_back({coeff, PauliString(word)});
  }
}

WeightedPauliSum WeightedPauliSum::identity(int num_qubits) {
  return WeightedPauliSum(
      num_qubits, {{Complex(1.0, 0.0), PauliString::identity(num_qubits)}});
}

bool WeightedPauliSum::is_hermitian(double tol) const {
  for (const auto& term : terms_) {
    if (std::abs(term.coeff.imag()) > tol) return false;
  }
  return true;
}

WeightedPauliSum pauli_decompose(const Matrix& op, double drop_tolerance) {
  if (op.rows() != op.cols()) {
    throw InvalidArgument("pauli_decompose: matrix must be square");
  }
  const Eigen::Index dim = op.rows();
  int num_qubits = 0;
  while ((Eigen::Index{1} << num_qubits) < dim) ++num_qubits;
  if (dim < 2 || (Eigen::Index{1} << num_qubits) != dim) {
    throw InvalidArgument("pauli_decompose: dimension " + std::to_string(dim) +
                          " is not a power of two >= 2");
  }
  if (!op.allFinite()) throw InvalidArgument("pauli_decompose: non-finite entry");

  std::vector<PauliTerm> terms;
  const std::uint64_t num_strings = std::uint64_t{1} << (2 * num_qubits);
  for (std::uint64_t code = 0; code < num_strings; ++code) {
    std::vector<PauliLetter> word(num_qubits);
    for (int q = 0; q < num_qubits; ++q) {
      word[q] = static_cast<PauliLetter>((code >> (2 * q)) & 3);
    }
    PauliString string(std::move(word));
    Complex trace(0.0, 0.0);
    for (Eigen::Index k = 0; k < dim; ++k) {
      auto [row, phase] = string.apply_to_basis(k);
      trace += phase * op(k, row);
    }
    const Complex coeff = trace / static_cast<double>(dim);
    if (std::abs(coeff) >= drop_tolerance) {
      terms.push_back({coeff, std::move(string)});
    }
  }
  return WeightedPauliSum(num_qubits, std::move(terms), drop_tolerance);
}

Matrix pauli_reconstruct(const WeightedPauliSum& sum) {
  const Eigen::Index dim = dim_for_qubits(sum.num_qubits());
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& term : sum.terms()) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      auto [row, phase] = term.string.apply_to_basis(k);
      out(row, k) += term.coeff * phase;
    }
  }
  return out;
}

WeightedPauliSum parse_pauli_sum(std::string_view text, int num_qubits) {
  if (num_qubits < 1) {
    throw InvalidArgument("parse_pauli_sum: need at least one qubit");
  }
  std::vector<PauliTerm> terms;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;  // blank line

    const Complex coeff = parse_coefficient(token, line_no);
    std::vector<PauliLetter> word(num_qubits, PauliLetter::I);
    int operators_seen = 0;
    while (tokens >> token) {
      ++operators_seen;
      if (token == "I") continue;  // whole-register identity
      PauliLetter letter;
      switch (token[0]) {
        case 'I': letter = PauliLetter::I; break;
        case 'X': letter = PauliLetter::X; break;
        case 'Y': letter = PauliLetter::Y; break;
        case 'Z': letter = PauliLetter::Z; break;
        default:
          throw ParseError("unknown Pauli letter", token, line_no);
      }
      if (token.size() < 2) {
        throw ParseError("missing qubit index", token, line_no);
      }
      char* end = nullptr;
      const long qubit = std::strtol(token.c_str() + 1, &end, 10);
      if (end != token.c_str() + token.size() || qubit < 0) {
        throw ParseError("malformed qubit index", token, line_no);
      }
      if (qubit >= num_qubits) {
        throw ParseError("qubit index exceeds register size", token, line_no);
      }
      if (word[qubit] != PauliLetter::I && letter != PauliLetter::I) {
        throw ParseError("duplicate qubit in term", token, line_no);
      }
      word[qubit] = letter;
    }
    if (operators_seen == 0) {
      throw ParseError("term has no operators", line, line_no);
    }
    terms.push_back({coeff, PauliString(std::move(word))});
  }
  if (terms.empty()) {
    throw ParseError("no terms found", std::string(text), line_no == 0 ? 1 : line_no);
  }
  return WeightedPauliSum(num_qubits, std::move(terms));
}

std::string format_pauli_sum(const WeightedPauliSum& sum) {
  std::string out;
  for (const auto& term : sum.terms()) {
    if (!out.empty()) out += '\n';
    out += format_complex(term.coeff);
    out += ' ';
    out += term.string.label();
  }
  return out;
}

}  // namespace commsim
