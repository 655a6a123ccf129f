#pragma once

#include "onenorm/integrals.hpp"
#include "onenorm/localize.hpp"
#include "onenorm/transform.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace onenorm {

enum class GradientScheme { Central, Forward };

enum class OptimizerAlgorithm {
  /// Limited-memory BFGS with box bounds [-pi, pi] on every generator entry.
  QuasiNewtonBounded,
  /// Dense quasi-Newton model (damped BFGS Hessian) solved for each step.
  SequentialQuadratic,
};

std::string to_string(OptimizerAlgorithm a);
OptimizerAlgorithm parse_algorithm(const std::string& name);

struct OptimizerConfig {
  std::vector<std::size_t> window;  // empty: all orbitals
  double fd_step = 1e-5;
  GradientScheme gradient_scheme = GradientScheme::Central;
  int max_iterations = 500;
  /// Stop once |delta lambda_Q| stays below this (Hartree) for
  /// `patience` consecutive accepted iterations.
  double convergence_tol = 1e-7;
  int patience = 3;
  /// Stop when ||grad||_inf falls below this.
  double gradient_tol = 1e-7;
  /// Largest change of any generator entry in one step (radians).
  double max_step = 0.5;
  int lbfgs_memory = 10;
  OptimizerAlgorithm algorithm = OptimizerAlgorithm::QuasiNewtonBounded;
  /// Pre-rotation before optimizing; nullopt starts from the given orbitals.
  std::optional<LocalizationScheme> start_from = LocalizationScheme::ER;
  LocalizationRequest localization;  // scheme and window are overridden

  void validate(std::size_t n_orbitals) const;
};

struct IterationRecord {
  int iteration = 0;
  double lambda_Q = 0.0;
  double grad_inf = 0.0;
  long evaluations = 0;  // cumulative objective calls
};

struct OptimizationResult {
  OrbitalRotation rotation;          // localization pre-rotation included
  MolecularHamiltonian hamiltonian;  // input H rotated by `rotation`
  std::vector<IterationRecord> trace;
  double initial_lambda = 0.0;  // input orbitals
  double start_lambda = 0.0;    // after the optional pre-rotation
  double final_lambda = 0.0;
  bool converged = false;
};

/// lambda_Q (no constant) of H rotated by exp(-K(kvec)) embedded in `window`.
double objective(const MolecularHamiltonian& h_ref, std::span<const double> kvec,
                 const std::vector<std::size_t>& window);

/// Finite-difference gradient; component evaluations run through
/// parallel_for and are independent of each other.
std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x,
    double step, GradientScheme scheme, double fx);

/// Minimizes lambda_Q over orbital rotations inside the configured window.
/// Accepted iterates never increase lambda_Q.
OptimizationResult minimize_norm(const MolecularHamiltonian& h, const OptimizerConfig& config,
                                 const AuxiliaryIntegrals& aux = {},
                                 const std::optional<Matrix>& c_current = std::nullopt);

}  // namespace onenorm
