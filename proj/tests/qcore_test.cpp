#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/operators.hpp"
#include "core/pauli.hpp"
#include "core/state.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace commsim;
using commsim::test::dense_rho;
using commsim::test::max_abs_diff;
using commsim::test::random_hermitian;
using commsim::test::random_matrix;

namespace {

Matrix damping_operator(double kappa) {
  return (std::sqrt(kappa) / 2.0) * (pauli_x() + Complex(0.0, 1.0) * pauli_y());
}

}  // namespace

TEST_CASE("dagger basics") {
  CHECK(max_abs_diff(dagger(identity_matrix(2)), identity_matrix(2)) == 0.0);
  CHECK(max_abs_diff(dagger(pauli_y()), pauli_y()) == 0.0);

  // L = (sqrt(kappa)/2)(X + iY) -> L^dag = (sqrt(kappa)/2)(X - iY)
  const Matrix expected =
      0.5 * (pauli_x() - Complex(0.0, 1.0) * pauli_y()).eval();
  CHECK(max_abs_diff(dagger(damping_operator(1.0)), expected) == 0.0);
}

TEST_CASE("dagger is an exact involution") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Matrix m = random_matrix(rng, 4);
    CHECK(max_abs_diff(dagger(dagger(m)), m) == 0.0);
  }
  CHECK_THROWS_AS(dagger(Matrix::Zero(2, 3)), InvalidArgument);
}

TEST_CASE("commutator basics") {
  CHECK(max_abs_diff(commutator(pauli_z(), pauli_z()), Matrix::Zero(2, 2)) ==
        0.0);

  // [X, Y] by direct multiplication, and the frozen value 2iZ.
  const Matrix direct = pauli_x() * pauli_y() - pauli_y() * pauli_x();
  CHECK(max_abs_diff(commutator(pauli_x(), pauli_y()), direct) == 0.0);
  CHECK(max_abs_diff(commutator(pauli_x(), pauli_y()),
                     (Complex(0.0, 2.0) * pauli_z()).eval()) < 1e-15);

  CHECK_THROWS_AS(commutator(pauli_x(), identity_matrix(4)),
                  DimensionMismatch);
}

TEST_CASE("i[rho(dt), H] reproduces the single-qubit closed form") {
  const double omega = -2.0, theta = 0.7, phi = 0.3, dt = 0.37;
  const Matrix h = (-omega / 2.0) * pauli_z();
  const Matrix rho = dense_rho(StateVector::bloch(theta, phi).amplitudes(), h, dt);

  const Matrix lhs = Complex(0.0, 1.0) * commutator(rho, h);
  const Complex upper = Complex(0.0, omega / 2.0) * std::sin(theta) *
                        std::exp(Complex(0.0, omega * dt - phi));
  CHECK(std::abs(lhs(0, 0)) < 1e-14);
  CHECK(std::abs(lhs(1, 1)) < 1e-14);
  CHECK(std::abs(lhs(0, 1) - upper) < 1e-13);
  CHECK(std::abs(lhs(1, 0) - std::conj(upper)) < 1e-13);
}

TEST_CASE("anticommutator basics") {
  CHECK(max_abs_diff(anticommutator(pauli_x(), pauli_y()), Matrix::Zero(2, 2)) <
        1e-15);

  std::mt19937_64 rng(12);
  const Matrix a = random_matrix(rng, 4);
  CHECK(max_abs_diff(anticommutator(identity_matrix(4), a), (2.0 * a).eval()) <
        1e-15);

  // <1|{rho(dt), L^dag L}|1> = 2 kappa sin^2(theta/2) = 1 at kappa = 1,
  // theta = pi/2.
  const double omega = -2.0, theta = std::numbers::pi / 2.0;
  const Matrix h = (-omega / 2.0) * pauli_z();
  const Matrix rho = dense_rho(StateVector::bloch(theta, 0.4).amplitudes(), h, 0.2);
  const Matrix l = damping_operator(1.0);
  const Matrix anti = anticommutator(rho, (l.adjoint() * l).eval());
  CHECK(std::abs(anti(1, 1) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("commutator symmetry properties hold exactly") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index dim = (i % 2 == 0) ? 2 : 4;
    const Matrix a = random_matrix(rng, dim);
    const Matrix b = random_matrix(rng, dim);
    CHECK(max_abs_diff(commutator(a, b), (-commutator(b, a)).eval()) == 0.0);
    CHECK(max_abs_diff(anticommutator(a, b), anticommutator(b, a)) == 0.0);
  }
}

TEST_CASE("i[rho, H] is Hermitian for Hermitian inputs") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 50; ++i) {
    const Matrix h = random_hermitian(rng, 4);
    const StateVector psi = test::random_state(rng, 2);
    const Matrix rho = (psi.amplitudes() * psi.amplitudes().adjoint()).eval();
    const Matrix c = Complex(0.0, 1.0) * commutator(rho, h);
    CHECK(is_hermitian(c, 1e-12));
  }
}

TEST_CASE("pauli_decompose worked examples") {
  // H = -(omega/2) Z with omega = -2 -> exactly Z.
  const Matrix h = (-(-2.0) / 2.0) * pauli_z();
  const WeightedPauliSum h_sum = pauli_decompose(h);
  REQUIRE(h_sum.size() == 1);
  CHECK(h_sum.terms()[0].string.label() == "Z0");
  CHECK(std::abs(h_sum.terms()[0].coeff - Complex(1.0, 0.0)) < 1e-15);

  const WeightedPauliSum id_sum = pauli_decompose(identity_matrix(4));
  REQUIRE(id_sum.size() == 1);
  CHECK(id_sum.terms()[0].string.is_identity());
  CHECK(std::abs(id_sum.terms()[0].coeff - Complex(1.0, 0.0)) < 1e-15);

  // L^dag L = (kappa/2)(I - Z) at kappa = 1.
  const Matrix l = damping_operator(1.0);
  const WeightedPauliSum prod = pauli_decompose((l.adjoint() * l).eval());
  REQUIRE(prod.size() == 2);
  for (const auto& term : prod.terms()) {
    if (term.string.is_identity()) {
      CHECK(std::abs(term.coeff - Complex(0.5, 0.0)) < 1e-15);
    } else {
      CHECK(term.string.label() == "Z0");
      CHECK(std::abs(term.coeff - Complex(-0.5, 0.0)) < 1e-15);
    }
  }

  CHECK_THROWS_AS(pauli_decompose(Matrix::Identity(3, 3)), InvalidArgument);
}

TEST_CASE("pauli_reconstruct worked examples") {
  // (1/2) X + (i/2) Y = |0><1| (the damping operator at kappa = 1).
  const WeightedPauliSum sum(
      1, {{Complex(0.5, 0.0), PauliString({PauliLetter::X})},
          {Complex(0.0, 0.5), PauliString({PauliLetter::Y})}});
  Matrix expected(2, 2);
  expected << 0, 1, 0, 0;
  CHECK(max_abs_diff(pauli_reconstruct(sum), expected) < 1e-15);

  const WeightedPauliSum empty(2, {});
  CHECK(max_abs_diff(pauli_reconstruct(empty), Matrix::Zero(4, 4)) == 0.0);
}

TEST_CASE("pauli round trip is the identity up to 3 qubits") {
  std::mt19937_64 rng(15);
  for (int qubits = 1; qubits <= 3; ++qubits) {
    for (int i = 0; i < 66; ++i) {
      const Matrix m = random_matrix(rng, dim_for_qubits(qubits));
      const WeightedPauliSum sum = pauli_decompose(m);
      CHECK(static_cast<Eigen::Index>(sum.size()) <=
            dim_for_qubits(qubits) * dim_for_qubits(qubits));
      CHECK(max_abs_diff(pauli_reconstruct(sum), m) < 1e-12);
    }
  }
}

TEST_CASE("Hermitian operators decompose with real coefficients") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 50; ++i) {
    const WeightedPauliSum sum = pauli_decompose(random_hermitian(rng, 8));
    for (const auto& term : sum.terms()) {
      CHECK(std::abs(term.coeff.imag()) < 1e-12);
    }
    CHECK(sum.is_hermitian(1e-12));
  }
}

TEST_CASE("drop tolerance removes numerically zero terms") {
  Matrix m = pauli_z();
  m(0, 0) += 1e-14;  // perturbs the identity coefficient only
  const WeightedPauliSum sum = pauli_decompose(m, 1e-12);
  REQUIRE(sum.size() == 1);
  CHECK(sum.terms()[0].string.label() == "Z0");
}

TEST_CASE("evolve_unitary worked examples") {
  std::mt19937_64 rng(17);
  const Matrix h2 = random_hermitian(rng, 4);
  CHECK(max_abs_diff(evolve_unitary(h2, 0.0), identity_matrix(4)) < 1e-13);

  // exp(i (omega/2) Z t) = diag(e^{i omega t / 2}, e^{-i omega t / 2})
  const double omega = 1.3, t = 0.8;
  const Matrix h = (-omega / 2.0) * pauli_z();
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = std::exp(Complex(0.0, omega * t / 2.0));
  expected(1, 1) = std::exp(Complex(0.0, -omega * t / 2.0));
  CHECK(max_abs_diff(evolve_unitary(h, t), expected) < 1e-13);

  const Matrix u = evolve_unitary(h2, 0.7);
  CHECK(max_abs_diff((u.adjoint() * u).eval(), identity_matrix(4)) < 1e-12);

  CHECK_THROWS_AS(evolve_unitary(random_matrix(rng, 4), 0.5), InvalidArgument);
}

TEST_CASE("evolve_unitary composes over time") {
  std::mt19937_64 rng(18);
  for (int i = 0; i < 20; ++i) {
    const Matrix h = random_hermitian(rng, 4);
    const double t1 = 0.3 + 0.1 * i, t2 = 0.9 - 0.02 * i;
    CHECK(max_abs_diff((evolve_unitary(h, t1) * evolve_unitary(h, t2)).eval(),
                       evolve_unitary(h, t1 + t2)) < 1e-10);
  }
}

TEST_CASE("StateVector enforces its invariants") {
  Vector bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(StateVector(1, bad), InvalidArgument);
  CHECK_NOTHROW(StateVector::normalised(1, bad));

  Vector wrong_len(3);
  wrong_len << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(StateVector(1, wrong_len), DimensionMismatch);

  const StateVector bloch = StateVector::bloch(std::numbers::pi / 3.0, 0.25);
  CHECK(std::abs(bloch.amplitudes()[0] - Complex(std::cos(std::numbers::pi / 6.0), 0)) <
        1e-15);
  CHECK(std::abs(bloch.amplitudes().squaredNorm() - 1.0) < 1e-14);

  CHECK_THROWS_AS(StateVector::basis(1, 2), InvalidArgument);
}

TEST_CASE("DensityMatrix enforces physicality") {
  std::mt19937_64 rng(19);
  const StateVector psi = test::random_state(rng, 1);
  CHECK_NOTHROW(DensityMatrix::pure(psi));

  Matrix traceless(2, 2);
  traceless << 0.5, 0, 0, 0.4;
  CHECK_THROWS_AS(DensityMatrix(traceless), InvalidArgument);

  Matrix negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix(negative), InvalidArgument);

  Matrix skew(2, 2);
  skew << 0.5, Complex(0.0, 0.3), Complex(0.0, 0.3), 0.5;
  CHECK_THROWS_AS(DensityMatrix(skew), InvalidArgument);
}

TEST_CASE("Pauli sum grammar") {
  const WeightedPauliSum simple = parse_pauli_sum("1.0 Z0", 1);
  REQUIRE(simple.size() == 1);
  CHECK(max_abs_diff(pauli_reconstruct(simple), pauli_z()) == 0.0);

  const WeightedPauliSum damping = parse_pauli_sum("0.5 X0\n0.5j Y0", 1);
  Matrix expected(2, 2);
  expected << 0, 1, 0, 0;
  CHECK(max_abs_diff(pauli_reconstruct(damping), expected) < 1e-15);

  const WeightedPauliSum two = parse_pauli_sum("-1.0 Z0 Z1\n0.25 I", 2);
  REQUIRE(two.size() == 2);

  // Duplicate strings merge; cancellation drops the term.
  const WeightedPauliSum merged = parse_pauli_sum("1.0 X0\n-1.0 X0\n2.0 Z0", 1);
  REQUIRE(merged.size() == 1);
  CHECK(merged.terms()[0].string.label() == "Z0");

  SECTION("errors carry the offending token and line") {
    try {
      parse_pauli_sum("0.5 X0\n-0.5jq Y0", 1);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.token == "-0.5jq");
      CHECK(e.line == 2);
    }
    try {
      parse_pauli_sum("1.0 Z3", 2);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.token == "Z3");
    }
    CHECK_THROWS_AS(parse_pauli_sum("1.0 X0 Y0", 1), ParseError);
    CHECK_THROWS_AS(parse_pauli_sum("1.0", 1), ParseError);
    CHECK_THROWS_AS(parse_pauli_sum("", 1), ParseError);
  }
}

TEST_CASE("format/parse round trip preserves the sum") {
  std::mt19937_64 rng(20);
  for (int i = 0; i < 25; ++i) {
    const WeightedPauliSum sum = pauli_decompose(random_matrix(rng, 4));
    const WeightedPauliSum back = parse_pauli_sum(format_pauli_sum(sum), 2);
    REQUIRE(back.size() == sum.size());
    CHECK(max_abs_diff(pauli_reconstruct(back), pauli_reconstruct(sum)) == 0.0);
  }
}
