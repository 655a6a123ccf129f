#pragma once

#include "onenorm/integrals.hpp"
#include "onenorm/transform.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace onenorm {

enum class LocalizationScheme { OAO, PM, FB, ER };

std::string to_string(LocalizationScheme s);
/// Accepts "oao", "pm", "fb", "er" (any case).
LocalizationScheme parse_scheme(const std::string& name);

struct LocalizationRequest {
  LocalizationScheme scheme = LocalizationScheme::ER;
  /// Orbitals allowed to mix; empty means all. Ignored by OAO, which always
  /// acts on the full space.
  std::vector<std::size_t> window;
  /// A sweep (or a single pair rotation) gaining less than
  /// convergence_tol * max(1, |objective|) counts as no progress.
  double convergence_tol = 1e-8;
  int max_sweeps = 200;
  /// When set, pair order is reshuffled each sweep with this seed.
  std::optional<std::uint64_t> seed;
  /// Electrons per orbital in the Mulliken charges of cost_PM. Unset: 2 when
  /// the window holds only occupied orbitals of a closed-shell reference,
  /// 1 otherwise.
  std::optional<double> pm_charge_weight;
};

struct LocalizationResult {
  OrbitalRotation rotation;          // full N x N, identity outside the window
  MolecularHamiltonian hamiltonian;  // H rotated by `rotation`
  /// Maximized objective before the first sweep and after each sweep.
  std::vector<double> objective_history;
  int sweeps = 0;
  bool converged = true;
};

/// sum_p (pp|pp): Edmiston-Ruedenberg self-repulsion.
double cost_ER(const MolecularHamiltonian& h);

/// sum_{p in window} |<p|r|p>|^2 for orbitals C (M x N). Maximizing it is
/// equivalent to minimizing the Foster-Boys spread, because
/// sum_p <p|r^2|p> is invariant under rotations inside the window.
double cost_FB(const Matrix& c, const AuxiliaryIntegrals& aux, const std::vector<std::size_t>& window);

/// sum_A Q_A^2 with Q_A = Z_A - weight * sum_{p in window} sum_{mu in A, nu}
/// C_mu,p S_mu,nu C_nu,p (total Mulliken charges).
double cost_PM(const Matrix& c, const AuxiliaryIntegrals& aux, const std::vector<std::size_t>& window,
               double weight = 2.0);

/// sum_{p in window} sum_A (q_A,p)^2 with q_A,p the Mulliken population of
/// orbital p on atom A. This is the functional the PM sweeps maximize: the
/// total charges in cost_PM are traces over the window and do not change
/// under rotations inside it.
double pm_orbital_locality(const Matrix& c, const AuxiliaryIntegrals& aux,
                           const std::vector<std::size_t>& window);

/// The PM charge weight used when LocalizationRequest::pm_charge_weight is unset.
double default_pm_charge_weight(const MolecularHamiltonian& h, const std::vector<std::size_t>& window);

/// Jacobi-sweep localization (PM, FB, ER) or Lowdin orthogonal AOs (OAO).
/// `c_current` are the AO coefficients of the orbitals H is expressed in;
/// when empty, aux.mo_coefficients is used (identity for OAO if absent).
LocalizationResult localize(const MolecularHamiltonian& h, const std::optional<Matrix>& c_current,
                            const AuxiliaryIntegrals& aux, const LocalizationRequest& request);

}  // namespace onenorm
