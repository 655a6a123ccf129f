#include "onenorm/optimize.hpp"

#include "onenorm/error.hpp"
#include "onenorm/norms.hpp"
#include "onenorm/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>

namespace onenorm {

namespace {

std::vector<std::size_t> full_window(const std::vector<std::size_t>& window, std::size_t n) {
  if (!window.empty()) return window;
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Shared state of both minimizers: the objective, evaluation counting and
/// the monotone-accept line search.
class Minimizer {
 public:
  Minimizer(const MolecularHamiltonian& h_ref, const std::vector<std::size_t>& window,
            const OptimizerConfig& config)
      : h_ref_(h_ref), window_(window), config_(config),
        dim_(AntisymmetricGenerator::parameter_count(window.size())) {}

  double value(const Vector& x) {
    ++evaluations_;
    const double f = objective(h_ref_, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), window_);
    if (!std::isfinite(f)) throw NumericalError("objective returned a non-finite value");
    return f;
  }

  Vector gradient(const Vector& x, double fx) {
    auto f = [this](std::span<const double> k) { return objective(h_ref_, k, window_); };
    const auto g = finite_difference_gradient(
        f, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), config_.fd_step,
        config_.gradient_scheme, fx);
    evaluations_ += static_cast<long>(g.size()) * (config_.gradient_scheme == GradientScheme::Central ? 2 : 1);
    for (double v : g)
      if (!std::isfinite(v)) throw NumericalError("finite-difference gradient is not finite");
    return to_vector(g);
  }

  Vector project(Vector x) const {
    if (config_.algorithm == OptimizerAlgorithm::QuasiNewtonBounded) {
      x = x.cwiseMax(-std::numbers::pi).cwiseMin(std::numbers::pi);
    }
    return x;
  }

  /// Backtracking along `d` from x; accepts the first strict decrease.
  bool line_search(const Vector& x, double fx, Vector d, Vector& x_new, double& f_new) {
    const double longest = inf_norm(d);
    if (!(longest > 0.0)) return false;
    if (longest > config_.max_step) d *= config_.max_step / longest;
    double alpha = 1.0;
    for (int k = 0; k < 40; ++k, alpha *= 0.5) {
      Vector trial = project(x + alpha * d);
      if ((trial - x).cwiseAbs().maxCoeff() == 0.0) break;
      const double ft = value(trial);
      if (ft < fx) {
        x_new = std::move(trial);
        f_new = ft;
        return true;
      }
    }
    return false;
  }

  std::size_t dimension() const { return dim_; }
  long evaluations() const { return evaluations_; }
  const OptimizerConfig& config() const { return config_; }

 private:
  const MolecularHamiltonian& h_ref_;
  const std::vector<std::size_t>& window_;
  const OptimizerConfig& config_;
  std::size_t dim_;
  long evaluations_ = 0;
};

struct RunOutcome {
  Vector x;
  double f = 0.0;
  bool converged = false;
};

// Two-loop recursion of limited-memory BFGS.
Vector lbfgs_direction(const Vector& g, const std::deque<std::pair<Vector, Vector>>& memory) {
  Vector q = -g;
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    const auto& [s, y] = memory[i];
    alpha[i] = s.dot(q) / y.dot(s);
    q -= alpha[i] * y;
  }
  if (!memory.empty()) {
    const auto& [s, y] = memory.back();
    q *= s.dot(y) / y.dot(y);
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const auto& [s, y] = memory[i];
    const double beta = y.dot(q) / y.dot(s);
    q += (alpha[i] - beta) * s;
  }
  return q;
}

RunOutcome run(Minimizer& m, std::vector<IterationRecord>& trace) {
  const auto& cfg = m.config();
  const auto dim = static_cast<Eigen::Index>(m.dimension());
  Vector x = Vector::Zero(dim);
  double f = m.value(x);
  Vector g = m.gradient(x, f);
  trace.push_back({0, f, inf_norm(g), m.evaluations()});

  const bool dense = cfg.algorithm == OptimizerAlgorithm::SequentialQuadratic;
  std::deque<std::pair<Vector, Vector>> memory;
  Matrix hessian = Matrix::Identity(dim, dim);
  int quiet = 0;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    if (inf_norm(g) < cfg.gradient_tol) return {x, f, true};

    Vector d = dense ? Vector(hessian.ldlt().solve(-g)) : lbfgs_direction(g, memory);
    if (!d.allFinite() || d.dot(g) >= 0.0) {
      d = -g;
      memory.clear();
      hessian.setIdentity();
    }
    Vector x_new;
    double f_new = f;
    bool moved = m.line_search(x, f, d, x_new, f_new);
    if (!moved && (!memory.empty() || !hessian.isIdentity())) {
      // Stalled on a kink of the curvature model: restart from steepest descent.
      memory.clear();
      hessian.setIdentity();
      moved = m.line_search(x, f, -g, x_new, f_new);
    }
    if (!moved) return {x, f, false};

    const Vector g_new = m.gradient(x_new, f_new);
    const Vector s = x_new - x;
    const Vector y = g_new - g;
    const double sy = s.dot(y);
    if (dense) {
      // Powell-damped BFGS update keeps the model positive definite.
      const Vector bs = hessian * s;
      const double sbs = s.dot(bs);
      if (sbs > 0.0) {
        const double theta = sy >= 0.2 * sbs ? 1.0 : 0.8 * sbs / (sbs - sy);
        const Vector r = theta * y + (1.0 - theta) * bs;
        const double sr = s.dot(r);
        if (sr > 0.0) hessian += r * r.transpose() / sr - bs * bs.transpose() / sbs;
      }
    } else if (sy > 1e-12 * s.norm() * y.norm()) {
      memory.emplace_back(s, y);
      if (static_cast<int>(memory.size()) > cfg.lbfgs_memory) memory.pop_front();
    }

    const double delta = f - f_new;
    x = x_new;
    f = f_new;
    g = g_new;
    trace.push_back({it, f, inf_norm(g), m.evaluations()});
    quiet = delta < cfg.convergence_tol ? quiet + 1 : 0;
    if (quiet >= cfg.patience) return {x, f, true};
  }
  return {x, f, false};
}

}  // namespace

std::string to_string(OptimizerAlgorithm a) {
  return a == OptimizerAlgorithm::QuasiNewtonBounded ? "quasi-newton-bounded" : "sequential-quadratic";
}

OptimizerAlgorithm parse_algorithm(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "quasi-newton-bounded" || s == "lbfgsb" || s == "l-bfgs-b") return OptimizerAlgorithm::QuasiNewtonBounded;
  if (s == "sequential-quadratic" || s == "slsqp" || s == "sqp") return OptimizerAlgorithm::SequentialQuadratic;
  throw InputError("unknown optimizer algorithm '" + name + "'");
}

void OptimizerConfig::validate(std::size_t n) const {
  if (!(fd_step > 1e-10 && fd_step < 1e-2)) throw InputError("fd_step must lie in (1e-10, 1e-2)");
  if (max_iterations < 0) throw InputError("max_iterations must be non-negative");
  if (!(convergence_tol >= 0.0) || !(gradient_tol >= 0.0)) throw InputError("tolerances must be non-negative");
  if (patience < 1) throw InputError("patience must be at least 1");
  if (!(max_step > 0.0)) throw InputError("max_step must be positive");
  if (lbfgs_memory < 1) throw InputError("lbfgs_memory must be at least 1");
  std::vector<char> seen(n, 0);
  for (std::size_t i : window) {
    if (i >= n) throw InputError("window index " + std::to_string(i) + " out of range");
    if (seen[i]++) throw InputError("window index " + std::to_string(i) + " repeated");
  }
}

double objective(const MolecularHamiltonian& h_ref, std::span<const double> kvec,
                 const std::vector<std::size_t>& window) {
  const auto local = exp_generator(
      AntisymmetricGenerator(window.size(), std::vector<double>(kvec.begin(), kvec.end())));
  return lambda_Q(rotate_hamiltonian(h_ref, embed_rotation(local, window, h_ref.n_orbitals())));
}

std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x,
    double step, GradientScheme scheme, double fx) {
  std::vector<double> grad(x.size());
  parallel_for(x.size(), [&](std::size_t i) {
    std::vector<double> probe(x.begin(), x.end());
    probe[i] = x[i] + step;
    const double up = f(probe);
    if (scheme == GradientScheme::Central) {
      probe[i] = x[i] - step;
      grad[i] = (up - f(probe)) / (2.0 * step);
    } else {
      grad[i] = (up - fx) / step;
    }
  });
  return grad;
}

OptimizationResult minimize_norm(const MolecularHamiltonian& h, const OptimizerConfig& config,
                                 const AuxiliaryIntegrals& aux, const std::optional<Matrix>& c_current) {
  const std::size_t n = h.n_orbitals();
  config.validate(n);
  const auto window = full_window(config.window, n);

  OptimizationResult result{OrbitalRotation::identity(n), h, {}, lambda_Q(h), 0.0, 0.0, false};
  OrbitalRotation pre = OrbitalRotation::identity(n);
  MolecularHamiltonian h_ref = h;
  if (config.start_from) {
    LocalizationRequest req = config.localization;
    req.scheme = *config.start_from;
    req.window = window;
    auto loc = localize(h, c_current, aux, req);
    pre = loc.rotation;
    h_ref = loc.hamiltonian;
  }
  result.start_lambda = lambda_Q(h_ref);

  if (window.size() < 2) {
    result.rotation = pre;
    result.hamiltonian = h_ref;
    result.final_lambda = result.start_lambda;
    result.trace.push_back({0, result.start_lambda, 0.0, 1});
    result.converged = true;
    return result;
  }

  Minimizer m(h_ref, window, config);
  const RunOutcome out = run(m, result.trace);
  result.converged = out.converged;

  if (out.x.cwiseAbs().maxCoeff() == 0.0) {
    result.rotation = pre;
    result.hamiltonian = h_ref;
  } else {
    const auto local = exp_generator(AntisymmetricGenerator(
        window.size(), std::vector<double>(out.x.data(), out.x.data() + out.x.size())));
    const OrbitalRotation step = embed_rotation(local, window, n);
    result.rotation = pre.then(step);
    result.hamiltonian = rotate_hamiltonian(h_ref, step);
  }
  result.final_lambda = lambda_Q(result.hamiltonian);
  return result;
}

}  // namespace onenorm
