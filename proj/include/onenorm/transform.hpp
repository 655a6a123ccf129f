#pragma once

#include "onenorm/integrals.hpp"

#include <span>
#include <utility>
#include <vector>

namespace onenorm {

/// Real orthogonal N x N matrix. Columns are the new orbitals expressed in
/// the old ones (C_new = C_old * U).
class OrbitalRotation {
 public:
  /// Throws InputError if ||U^T U - I||_max exceeds `tolerance`.
  explicit OrbitalRotation(Matrix u, double tolerance = 1e-10);
  static OrbitalRotation identity(std::size_t n);

  const Matrix& matrix() const noexcept { return u_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(u_.rows()); }

  /// this followed by `next`: C U_this U_next.
  OrbitalRotation then(const OrbitalRotation& next) const;

 private:
  Matrix u_;
};

/// Strictly-upper-triangle parameters of an antisymmetric K, row-major
/// (K_01, K_02, ..., K_0,n-1, K_12, ...).
class AntisymmetricGenerator {
 public:
  AntisymmetricGenerator(std::size_t dimension, std::vector<double> params);
  static AntisymmetricGenerator zero(std::size_t dimension);
  static std::size_t parameter_count(std::size_t dimension) {
    return dimension < 2 ? 0 : dimension * (dimension - 1) / 2;
  }

  std::size_t dimension() const noexcept { return n_; }
  std::span<const double> params() const noexcept { return params_; }
  Matrix matrix() const;

 private:
  std::size_t n_;
  std::vector<double> params_;
};

/// U = exp(-K).
OrbitalRotation exp_generator(const AntisymmetricGenerator& k);

/// Embeds a w x w rotation acting on `window` into the N x N identity.
OrbitalRotation embed_rotation(const OrbitalRotation& local, std::span<const std::size_t> window,
                               std::size_t n);

/// C^T h C for an M x N coefficient matrix C.
Matrix transform_one_body(const Matrix& h, const Matrix& c);

/// sum_{abcd} g_abcd C_ap C_bq C_cr C_ds, done as four successive quarter
/// transformations. Throws NumericalError when the result breaks 8-fold
/// symmetry by more than 1e-8 (relative to the largest integral).
TwoBodyTensor transform_two_body(const TwoBodyTensor& g, const Matrix& c);

/// h' = U^T h U, g' = transform_two_body(g, U); core constant unchanged.
MolecularHamiltonian rotate_hamiltonian(const MolecularHamiltonian& h, const OrbitalRotation& u);

/// Givens rotation [[cos, sin], [-sin, cos]] on the (p, q) block.
OrbitalRotation jacobi_rotation(std::size_t n, std::size_t p, std::size_t q, double theta);

/// lambda_Q (no constant) of H rotated by jacobi_rotation(p, q, theta) for each theta.
std::vector<double> jacobi_rotation_norm_scan(const MolecularHamiltonian& h, std::size_t p,
                                              std::size_t q, std::span<const double> thetas);

struct FrozenCoreResult {
  MolecularHamiltonian hamiltonian;  // active orbitals only
  double shift = 0.0;                // frozen mean-field energy
};

/// Folds frozen orbitals into a scalar shift and an effective one-body
/// potential; drops virtual orbitals.
FrozenCoreResult freeze_core(const MolecularHamiltonian& h, const ActiveSpaceSpec& spec);

/// S^{-1/2} by symmetric eigendecomposition. Throws InputError("near-singular
/// overlap") when an eigenvalue is below 1e-10.
Matrix lowdin_orthogonalize(const Matrix& s);

}  // namespace onenorm
