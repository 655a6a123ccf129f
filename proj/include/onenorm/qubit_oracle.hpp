#pragma once

#include "onenorm/integrals.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace onenorm {

/// Pauli string over at most 32 qubits as X/Z bit masks: qubit j carries
/// X if only x bit j is set, Z if only z bit j is set, Y if both.
struct PauliString {
  std::uint32_t x = 0;
  std::uint32_t z = 0;

  bool is_identity() const noexcept { return x == 0 && z == 0; }
  /// Character j is the operator on qubit j.
  std::string to_string(std::size_t n_qubits) const;
  static PauliString from_string(const std::string& s);

  friend auto operator<=>(const PauliString&, const PauliString&) = default;
};

/// Product of two Pauli strings: phase * PauliString with phase in {1, i, -1, -i}.
std::pair<std::complex<double>, PauliString> multiply(const PauliString& a, const PauliString& b);

/// Real linear combination of distinct Pauli strings. Qubit 2p + sigma holds
/// spatial orbital p with spin sigma.
struct PauliTermSum {
  std::size_t n_qubits = 0;
  std::map<PauliString, double> terms;

  double identity_coefficient() const;
};

inline constexpr std::size_t kMaxOracleOrbitals = 8;
inline constexpr std::size_t kMaxDenseQubits = 12;

/// Symbolic Jordan-Wigner expansion of sum h_pq E_pq + 1/2 sum g_pqrs e_pqrs
/// plus the core constant. Throws InputError when N > 8.
PauliTermSum jordan_wigner_expand(const MolecularHamiltonian& h);

/// sum_j |h_j| over non-identity strings, plus |identity| when requested.
double lambda_Q_oracle(const PauliTermSum& t, bool include_identity);

/// Number of non-identity strings with |c| > 1e-12.
std::size_t sparsity_count(const PauliTermSum& t);

using ComplexMatrix = Eigen::MatrixXcd;

/// Dense 2^n x 2^n matrix. Basis state bit j = occupation of qubit j.
ComplexMatrix dense_matrix(const PauliTermSum& t);

/// <b| H |b> for the computational-basis state `occupation`.
double determinant_expectation(const PauliTermSum& t, std::uint32_t occupation);
double determinant_expectation(const ComplexMatrix& m, std::uint32_t occupation);

}  // namespace onenorm
