#include "onenorm/error.hpp"
#include "onenorm/norms.hpp"
#include "onenorm/qubit_oracle.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace onenorm;
using namespace onenorm::testing;

namespace {

MolecularHamiltonian one_orbital(double h00, double g0000) {
  Matrix h(1, 1);
  h(0, 0) = h00;
  TwoBodyTensor g(1);
  g.set(0, 0, 0, 0, g0000);
  return MolecularHamiltonian(0.0, h, g);
}

double coefficient(const PauliTermSum& t, const std::string& s) {
  const auto it = t.terms.find(PauliString::from_string(s));
  return it == t.terms.end() ? 0.0 : it->second;
}

}  // namespace

TEST_CASE("pauli string text form") {
  const auto p = PauliString::from_string("XYZI");
  CHECK(p.x == 0b0011u);
  CHECK(p.z == 0b0110u);
  CHECK(p.to_string(4) == "XYZI");
  CHECK(PauliString::from_string("IIII").is_identity());
  CHECK_THROWS_AS(PauliString::from_string("XQ"), InputError);
}

TEST_CASE("single-qubit multiplication table") {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  struct Row {
    const char *a, *b, *c;
    C phase;
  };
  const Row table[] = {{"X", "Y", "Z", i},  {"Y", "X", "Z", -i}, {"Y", "Z", "X", i}, {"Z", "Y", "X", -i},
                       {"Z", "X", "Y", i},  {"X", "Z", "Y", -i}, {"X", "X", "I", 1.0}, {"Y", "Y", "I", 1.0},
                       {"Z", "Z", "I", 1.0}, {"I", "Y", "Y", 1.0}};
  for (const auto& r : table) {
    const auto [phase, p] = multiply(PauliString::from_string(r.a), PauliString::from_string(r.b));
    CHECK(p.to_string(1) == r.c);
    CHECK(std::abs(phase - r.phase) <= 1e-15);
  }
}

TEST_CASE("multiplication is associative") {
  Rng rng(61);
  std::uniform_int_distribution<std::uint32_t> bits(0, 63);
  for (int t = 0; t < 200; ++t) {
    const PauliString a{bits(rng), bits(rng)}, b{bits(rng), bits(rng)}, c{bits(rng), bits(rng)};
    const auto [p1, ab] = multiply(a, b);
    const auto [p2, ab_c] = multiply(ab, c);
    const auto [p3, bc] = multiply(b, c);
    const auto [p4, a_bc] = multiply(a, bc);
    CHECK(ab_c == a_bc);
    CHECK(std::abs(p1 * p2 - p3 * p4) <= 1e-15);
  }
}

TEST_CASE("one orbital with only h") {
  const auto t = jordan_wigner_expand(one_orbital(1.0, 0.0));
  CHECK(t.n_qubits == 2);
  CHECK(t.identity_coefficient() == doctest::Approx(1.0));
  CHECK(coefficient(t, "ZI") == doctest::Approx(-0.5));
  CHECK(coefficient(t, "IZ") == doctest::Approx(-0.5));
  CHECK(t.terms.size() == 3);
  CHECK(lambda_Q_oracle(t, false) == doctest::Approx(1.0));
  CHECK(lambda_Q_oracle(t, true) == doctest::Approx(2.0));
  CHECK(sparsity_count(t) == 2);
}

TEST_CASE("zero Hamiltonian has no terms") {
  const auto t = jordan_wigner_expand(MolecularHamiltonian::zero(3));
  CHECK(t.terms.empty());
  CHECK(t.identity_coefficient() == 0.0);
  CHECK(sparsity_count(t) == 0);
}

TEST_CASE("core constant is the only identity shift") {
  Rng rng(62);
  const auto h = random_hamiltonian(2, rng);
  const auto a = jordan_wigner_expand(h);
  const auto b = jordan_wigner_expand(h.with_core_constant(2.5));
  CHECK(b.identity_coefficient() - a.identity_coefficient() == doctest::Approx(2.5));
  CHECK(lambda_Q_oracle(a, false) == doctest::Approx(lambda_Q_oracle(b, false)).epsilon(1e-14));
}

TEST_CASE("dense matrix against explicit fermionic operators") {
  Rng rng(63);
  for (std::size_t n : {1u, 2u, 3u}) {
    for (int t = 0; t < 3; ++t) {
      const auto h = random_hamiltonian(n, rng, 1.0, 0.7);
      const auto m = dense_matrix(jordan_wigner_expand(h));
      const auto ref = fermionic_dense_matrix(h);
      REQUIRE(m.rows() == ref.rows());
      CHECK((m - ref).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("dense matrix of simple sums") {
  PauliTermSum t;
  t.n_qubits = 2;
  t.terms[PauliString{}] = 0.75;
  auto m = dense_matrix(t);
  CHECK((m - 0.75 * ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  t.terms.clear();
  t.terms[PauliString::from_string("ZI")] = 1.0;
  m = dense_matrix(t);
  // Bit 0 set means qubit 0 occupied, Z eigenvalue -1.
  for (std::uint32_t b = 0; b < 4; ++b) CHECK(m(b, b).real() == ((b & 1u) ? -1.0 : 1.0));
}

TEST_CASE("determinant expectations") {
  const auto h1 = one_orbital(1.0, 0.4);
  const auto t1 = jordan_wigner_expand(h1);
  CHECK(std::abs(determinant_expectation(t1, 0b00)) <= 1e-15);
  CHECK(determinant_expectation(t1, 0b11) == doctest::Approx(2.4));
  CHECK(determinant_expectation(t1, 0b01) == doctest::Approx(1.0));

  Rng rng(64);
  for (int k = 0; k < 10; ++k) {
    const auto h = random_hamiltonian(3, rng, 1.0, 0.3);
    const auto t = jordan_wigner_expand(h);
    const auto m = dense_matrix(t);
    for (std::uint32_t occ = 0; occ < 64; occ += 7) {
      CHECK(std::abs(determinant_expectation(t, occ) - slater_energy(h, occ)) <= 1e-10);
      CHECK(std::abs(determinant_expectation(m, occ) - slater_energy(h, occ)) <= 1e-10);
    }
  }
}

TEST_CASE("size guards") {
  CHECK_THROWS_AS(jordan_wigner_expand(MolecularHamiltonian::zero(kMaxOracleOrbitals + 1)), InputError);
  PauliTermSum big;
  big.n_qubits = kMaxDenseQubits + 1;
  CHECK_THROWS_AS(dense_matrix(big), InputError);
}

TEST_CASE("closed-form lambda_Q equals the Pauli coefficient sum") {
  Rng rng(65);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int t = 0; t < 5; ++t) {
      const auto h = random_hamiltonian(n, rng, 1.0, 0.2);
      const auto terms = jordan_wigner_expand(h);
      const auto r = norm_report(h);
      CHECK(std::abs(lambda_Q_oracle(terms, false) - r.lambda_Q_no_const) <= 1e-9);
      // lambda_C and the identity coefficient differ only by the core constant.
      CHECK(std::abs(std::abs(terms.identity_coefficient() - h.core_constant()) - r.lambda_C) <= 1e-9);
    }
  }
}
