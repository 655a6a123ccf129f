#pragma once

// Independent reference constructions shared by the unit and acceptance
// tests. Nothing here calls the code paths it is used to check.

#include "onenorm/integrals.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace onenorm::testing {

using Rng = std::mt19937_64;

/// Row-major dense N^4 tensor.
struct DenseTensor {
  std::size_t n = 0;
  std::vector<double> v;

  explicit DenseTensor(std::size_t n_) : n(n_), v(n_ * n_ * n_ * n_, 0.0) {}
  double& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return v[((p * n + q) * n + r) * n + s];
  }
  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return v[((p * n + q) * n + r) * n + s];
  }
};

DenseTensor dense_of(const TwoBodyTensor& g);

/// Standard-normal h (symmetrized) and g (8-fold symmetrized), scaled.
MolecularHamiltonian random_hamiltonian(std::size_t n, Rng& rng, double scale = 1.0, double core = 0.0,
                                        std::optional<int> n_electrons = std::nullopt);

/// g_pqrs = sum_k A^k_pq A^k_rs over `rank` random symmetric A^k.
MolecularHamiltonian random_psd_hamiltonian(std::size_t n, std::size_t rank, Rng& rng);

/// Haar-like orthogonal matrix from the QR factorization of a Gaussian matrix.
Matrix random_orthogonal(std::size_t n, Rng& rng);

std::vector<double> random_params(std::size_t count, Rng& rng, double scale);

/// Quadruple sum per output element, O(N^8).
DenseTensor naive_transform_two_body(const DenseTensor& g, const Matrix& c);

/// Double sum per output element.
Matrix naive_transform_one_body(const Matrix& h, const Matrix& c);

/// Second-quantized Hamiltonian acting on occupation-number states of 2N
/// spin orbitals (bit 2p+sigma), with Jordan-Wigner signs from explicit
/// anticommutation counting.
Eigen::MatrixXcd fermionic_dense_matrix(const MolecularHamiltonian& h);

/// Slater-determinant energy from the closed-shell / open-shell Slater rules.
double slater_energy(const MolecularHamiltonian& h, std::uint32_t occupation);

/// Random AO data with `n_ao` AOs on `n_atoms` atoms and N = n_ao orthonormal
/// MOs (C^T S C = I). Dipoles are random symmetric matrices.
AuxiliaryIntegrals random_aux(std::size_t n_ao, std::size_t n_atoms, Rng& rng);

/// Hamiltonian consistent with `aux`: AO integrals for a random PSD two-body
/// operator and random one-body operator, transformed into the MO basis.
MolecularHamiltonian hamiltonian_for_aux(const AuxiliaryIntegrals& aux, Rng& rng);

std::string fixture_path(const std::string& name);
bool fixture_exists(const std::string& name);

}  // namespace onenorm::testing
