#pragma once

#include "onenorm/integrals.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace onenorm {

/// Low-rank factorization g_pqrs ~= sum_l L^l_pq L^l_rs of the two-body
/// tensor viewed as a matrix over composite pair indices.
struct CholeskyFactorization {
  std::vector<Matrix> vectors;  // symmetric N x N
  double residual = 0.0;        // largest remaining diagonal
  double tolerance = 0.0;

  /// max_pqrs |g_pqrs - sum_l L^l_pq L^l_rs|.
  double reconstruction_error(const TwoBodyTensor& g) const;
};

/// All 1-norm variants of a Hamiltonian, in Hartree. The core constant never
/// enters any of them.
struct NormReport {
  std::size_t n_orbitals = 0;
  double lambda_C = 0.0;
  double lambda_T = 0.0;
  double lambda_V_lee = 0.0;
  double lambda_V_prime = 0.0;
  double lambda_Q_no_const = 0.0;  // lambda_T + lambda_V_prime
  double lambda_Q_full = 0.0;      // lambda_C + lambda_T + lambda_V_prime
  double lambda_lee = 0.0;         // lambda_T + lambda_V_lee
  std::optional<double> lambda_SF;
  IntegralClassSums class_sums;
};

double lambda_C(const MolecularHamiltonian& h);
double lambda_T(const MolecularHamiltonian& h);
double lambda_V_lee(const MolecularHamiltonian& h);
double lambda_V_prime(const MolecularHamiltonian& h);

/// lambda_T + lambda_V_prime: the norm minimized by the orbital optimizer.
double lambda_Q(const MolecularHamiltonian& h);

inline constexpr double kDefaultCholeskyTolerance = 1e-8;

/// Diagonal-pivoted Cholesky. Throws NumericalError("not positive
/// semi-definite") once a residual diagonal drops below -10 * tolerance.
CholeskyFactorization cholesky_decompose(const MolecularHamiltonian& h,
                                         double tolerance = kDefaultCholeskyTolerance);

/// 1/4 sum_l (sum_pq |L^l_pq|)^2.
double lambda_SF(const CholeskyFactorization& f);

NormReport norm_report(const MolecularHamiltonian& h, bool with_cholesky = false,
                       double cholesky_tolerance = kDefaultCholeskyTolerance);

nlohmann::ordered_json to_json(const NormReport& r);
nlohmann::ordered_json to_json(const IntegralClassSums& c);

}  // namespace onenorm
