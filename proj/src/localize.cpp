#include "onenorm/localize.hpp"

#include "onenorm/error.hpp"
#include "onenorm/norms.hpp"
#include "onenorm/summation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>

namespace onenorm {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::vector<std::size_t> resolve_window(const std::vector<std::size_t>& window, std::size_t n) {
  if (window.empty()) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<char> seen(n, 0);
  for (std::size_t i : window) {
    if (i >= n) throw InputError("window index " + std::to_string(i) + " out of range");
    if (seen[i]++) throw InputError("window index " + std::to_string(i) + " repeated");
  }
  return window;
}

Matrix window_columns(const Matrix& c, const std::vector<std::size_t>& window) {
  Matrix out(c.rows(), ix(window.size()));
  for (std::size_t a = 0; a < window.size(); ++a) {
    if (ix(window[a]) >= c.cols()) throw InputError("window index exceeds MO coefficient columns");
    out.col(ix(a)) = c.col(ix(window[a]));
  }
  return out;
}

// Symmetrized atom-projected overlap: (S_A + S_A^T)/2 with S_A the rows of S
// belonging to atom A.
std::vector<Matrix> atom_overlaps(const AuxiliaryIntegrals& aux) {
  const Matrix& s = *aux.ao_overlap;
  const auto& atom_of = *aux.ao_to_atom;
  const std::size_t n_atoms = aux.atomic_numbers->size();
  std::vector<Matrix> out(n_atoms, Matrix::Zero(s.rows(), s.cols()));
  for (Eigen::Index mu = 0; mu < s.rows(); ++mu) {
    Matrix& sa = out[static_cast<std::size_t>(atom_of[static_cast<std::size_t>(mu)])];
    sa.row(mu) += 0.5 * s.row(mu);
    sa.col(mu) += 0.5 * s.row(mu).transpose();
  }
  return out;
}

void require_pm_sections(const AuxiliaryIntegrals& aux) {
  if (!aux.ao_overlap || !aux.ao_to_atom || !aux.atomic_numbers) {
    throw InputError("Pipek-Mezey needs OVERLAP, AO_ATOM_MAP and ATOMIC_NUMBERS");
  }
}

void require_fb_sections(const AuxiliaryIntegrals& aux) {
  if (!aux.dipole_ao) throw InputError("Foster-Boys needs DIPOLE_X/Y/Z sections");
}

// Rotates rows and columns a, b of a symmetric matrix by the pair rotation
// a' = c a + s b, b' = -s a + c b.
void rotate_symmetric(Matrix& x, Eigen::Index a, Eigen::Index b, double c, double s) {
  const Vector col_a = x.col(a), col_b = x.col(b);
  x.col(a) = c * col_a + s * col_b;
  x.col(b) = -s * col_a + c * col_b;
  const Eigen::RowVectorXd row_a = x.row(a), row_b = x.row(b);
  x.row(a) = c * row_a + s * row_b;
  x.row(b) = -s * row_a + c * row_b;
}

// Diagonal entries (a'a') and (b'b') of a rotated symmetric 2x2 block.
std::pair<double, double> rotated_diagonal(double xaa, double xab, double xbb, double c, double s) {
  return {c * c * xaa + 2 * c * s * xab + s * s * xbb, s * s * xaa - 2 * c * s * xab + c * c * xbb};
}

// Objective restricted to a sweep. Indices are local to the window.
class SweepObjective {
 public:
  virtual ~SweepObjective() = default;
  virtual double total() const = 0;
  /// Contribution of orbitals a, b after rotating them by theta.
  virtual std::function<double(double)> pair_function(std::size_t a, std::size_t b) const = 0;
  virtual void rotate(std::size_t a, std::size_t b, double c, double s) = 0;
};

class EdmistonRuedenberg final : public SweepObjective {
 public:
  EdmistonRuedenberg(const MolecularHamiltonian& h, const std::vector<std::size_t>& window)
      : w_(window.size()), t_(w_ * w_ * w_ * w_) {
    std::size_t idx = 0;
    for (std::size_t p : window)
      for (std::size_t q : window)
        for (std::size_t r : window)
          for (std::size_t s : window) t_[idx++] = h.g(p, q, r, s);
  }

  double total() const override {
    AccurateSum sum;
    for (std::size_t a = 0; a < w_; ++a) sum += at(a, a, a, a);
    return sum.value();
  }

  std::function<double(double)> pair_function(std::size_t a, std::size_t b) const override {
    std::array<double, 16> block{};
    const std::size_t id[2] = {a, b};
    for (int i = 0; i < 16; ++i) block[static_cast<std::size_t>(i)] = at(id[(i >> 3) & 1], id[(i >> 2) & 1], id[(i >> 1) & 1], id[i & 1]);
    return [block](double theta) {
      const double c = std::cos(theta), s = std::sin(theta);
      const double va[2] = {c, s}, vb[2] = {-s, c};
      double fa = 0.0, fb = 0.0;
      for (int i = 0; i < 16; ++i) {
        const int i0 = (i >> 3) & 1, i1 = (i >> 2) & 1, i2 = (i >> 1) & 1, i3 = i & 1;
        fa += va[i0] * va[i1] * va[i2] * va[i3] * block[static_cast<std::size_t>(i)];
        fb += vb[i0] * vb[i1] * vb[i2] * vb[i3] * block[static_cast<std::size_t>(i)];
      }
      return fa + fb;
    };
  }

  void rotate(std::size_t a, std::size_t b, double c, double s) override {
    const std::size_t strides[4] = {w_ * w_ * w_, w_ * w_, w_, 1};
    for (std::size_t stride : strides) {
      const std::size_t offset = (b - a) * stride;  // b > a
      for (std::size_t idx = 0; idx < t_.size(); ++idx) {
        if ((idx / stride) % w_ != a) continue;
        const double x = t_[idx], y = t_[idx + offset];
        t_[idx] = c * x + s * y;
        t_[idx + offset] = -s * x + c * y;
      }
    }
  }

 private:
  double at(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return t_[((p * w_ + q) * w_ + r) * w_ + s];
  }
  std::size_t w_;
  std::vector<double> t_;
};

// Objectives of the form sum_k sum_a (X_k)_aa^2 over symmetric matrices X_k
// expressed in the window orbitals (FB: dipole components, PM: atom
// populations).
class SquaredDiagonals final : public SweepObjective {
 public:
  explicit SquaredDiagonals(std::vector<Matrix> mats) : mats_(std::move(mats)) {}

  double total() const override {
    AccurateSum sum;
    for (const Matrix& x : mats_)
      for (Eigen::Index a = 0; a < x.rows(); ++a) sum += x(a, a) * x(a, a);
    return sum.value();
  }

  std::function<double(double)> pair_function(std::size_t a, std::size_t b) const override {
    std::vector<std::array<double, 3>> blocks;
    blocks.reserve(mats_.size());
    for (const Matrix& x : mats_) blocks.push_back({x(ix(a), ix(a)), x(ix(a), ix(b)), x(ix(b), ix(b))});
    return [blocks = std::move(blocks)](double theta) {
      const double c = std::cos(theta), s = std::sin(theta);
      double f = 0.0;
      for (const auto& bl : blocks) {
        const auto [xa, xb] = rotated_diagonal(bl[0], bl[1], bl[2], c, s);
        f += xa * xa + xb * xb;
      }
      return f;
    };
  }

  void rotate(std::size_t a, std::size_t b, double c, double s) override {
    for (Matrix& x : mats_) rotate_symmetric(x, ix(a), ix(b), c, s);
  }

 private:
  std::vector<Matrix> mats_;
};

struct PairStep {
  double theta = 0.0;
  double gain = 0.0;
};

// Best rotation angle for a pair objective f(theta). All supported
// objectives are invariant under theta -> theta + pi/2 and have the form
// a0 + a4 cos(4 theta) + b4 sin(4 theta); the coefficients are recovered
// from eight samples. When the samples do not fit that form a 64-point grid
// is used instead.
PairStep best_pair_angle(const std::function<double(double)>& f) {
  constexpr int kSamples = 8;
  constexpr double pi = std::numbers::pi;
  std::array<double, kSamples> v{};
  for (int k = 0; k < kSamples; ++k) v[static_cast<std::size_t>(k)] = f(k * pi / kSamples);
  const double f0 = v[0];
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  // Fourier coefficients in phi = 2 theta for harmonics 0..3.
  std::array<double, 4> ca{}, sa{};
  for (int m = 0; m < 4; ++m) {
    for (int k = 0; k < kSamples; ++k) {
      const double phi = 2.0 * pi * k / kSamples;
      ca[static_cast<std::size_t>(m)] += v[static_cast<std::size_t>(k)] * std::cos(m * phi);
      sa[static_cast<std::size_t>(m)] += v[static_cast<std::size_t>(k)] * std::sin(m * phi);
    }
  }
  const double a4 = 2.0 * ca[2] / kSamples;
  const double b4 = 2.0 * sa[2] / kSamples;
  const double stray = std::max({std::abs(ca[1]), std::abs(sa[1]), std::abs(ca[3]), std::abs(sa[3])}) /
                       kSamples;

  PairStep best;
  if (stray <= 1e-10 * std::max(1.0, scale)) {
    const double amplitude = std::hypot(a4, b4);
    if (amplitude <= 1e-14 * std::max(1.0, scale)) return best;
    best.theta = 0.25 * std::atan2(b4, a4);
    best.gain = amplitude - a4;
    if (!(best.gain > 0.0)) return PairStep{};
    // Evaluate directly so the reported gain is what the rotation delivers.
    best.gain = f(best.theta) - f0;
    if (!(best.gain > 0.0)) return PairStep{};
    return best;
  }
  constexpr int kGrid = 64;
  for (int k = 0; k < kGrid; ++k) {
    const double theta = -pi / 4 + k * (pi / 2) / kGrid;
    const double gain = f(theta) - f0;
    if (gain > best.gain || (gain == best.gain && std::abs(theta) < std::abs(best.theta))) {
      best = {theta, gain};
    }
  }
  return best;
}

LocalizationResult jacobi_sweeps(const MolecularHamiltonian& h, const std::vector<std::size_t>& window,
                                 SweepObjective& objective, const LocalizationRequest& request) {
  const std::size_t w = window.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = a + 1; b < w; ++b) pairs.emplace_back(a, b);
  std::optional<std::mt19937_64> rng;
  if (request.seed) rng.emplace(*request.seed);

  Matrix u_local = Matrix::Identity(ix(w), ix(w));
  LocalizationResult result{OrbitalRotation::identity(h.n_orbitals()), h, {}, 0, false};
  double current = objective.total();
  result.objective_history.push_back(current);

  for (int sweep = 0; sweep < request.max_sweeps; ++sweep) {
    if (rng) std::shuffle(pairs.begin(), pairs.end(), *rng);
    const double start = current;
    for (const auto& [a, b] : pairs) {
      const PairStep step = best_pair_angle(objective.pair_function(a, b));
      if (step.gain < request.convergence_tol * std::max(1.0, std::abs(current))) continue;
      const double c = std::cos(step.theta), s = std::sin(step.theta);
      objective.rotate(a, b, c, s);
      const Vector ua = u_local.col(ix(a)), ub = u_local.col(ix(b));
      u_local.col(ix(a)) = c * ua + s * ub;
      u_local.col(ix(b)) = -s * ua + c * ub;
      current = objective.total();
    }
    result.sweeps = sweep + 1;
    result.objective_history.push_back(current);
    if (current - start < request.convergence_tol * std::max(1.0, std::abs(start))) {
      result.converged = true;
      break;
    }
  }

  if (result.sweeps == 0) result.converged = true;
  if (u_local.isIdentity(0.0)) return result;
  // Re-orthonormalize the accumulated product of Givens rotations.
  Eigen::HouseholderQR<Matrix> qr(u_local);
  Matrix q = qr.householderQ();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (q.col(j).dot(u_local.col(j)) < 0) q.col(j) *= -1.0;
  result.rotation = embed_rotation(OrbitalRotation(std::move(q)), window, h.n_orbitals());
  result.hamiltonian = rotate_hamiltonian(h, result.rotation);
  return result;
}

}  // namespace

std::string to_string(LocalizationScheme s) {
  switch (s) {
    case LocalizationScheme::OAO: return "oao";
    case LocalizationScheme::PM: return "pm";
    case LocalizationScheme::FB: return "fb";
    case LocalizationScheme::ER: return "er";
  }
  return "?";
}

LocalizationScheme parse_scheme(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "oao") return LocalizationScheme::OAO;
  if (s == "pm") return LocalizationScheme::PM;
  if (s == "fb") return LocalizationScheme::FB;
  if (s == "er") return LocalizationScheme::ER;
  throw InputError("unknown localization scheme '" + name + "' (expected oao, pm, fb or er)");
}

double default_pm_charge_weight(const MolecularHamiltonian& h, const std::vector<std::size_t>& window) {
  if (!h.n_electrons() || *h.n_electrons() % 2 != 0) return 1.0;
  const auto n_occ = static_cast<std::size_t>(*h.n_electrons() / 2);
  const bool occupied_only =
      std::all_of(window.begin(), window.end(), [&](std::size_t p) { return p < n_occ; });
  return occupied_only ? 2.0 : 1.0;
}

double cost_ER(const MolecularHamiltonian& h) {
  AccurateSum s;
  for (std::size_t p = 0; p < h.n_orbitals(); ++p) s += h.g(p, p, p, p);
  return s.value();
}

double cost_FB(const Matrix& c, const AuxiliaryIntegrals& aux, const std::vector<std::size_t>& window) {
  require_fb_sections(aux);
  const Matrix cw = window_columns(c, resolve_window(window, static_cast<std::size_t>(c.cols())));
  AccurateSum s;
  for (const Matrix& d : *aux.dipole_ao) {
    if (d.rows() != c.rows()) throw InputError("dipole matrices do not match MO coefficient rows");
    const Matrix x = cw.transpose() * d * cw;
    for (Eigen::Index a = 0; a < x.rows(); ++a) s += x(a, a) * x(a, a);
  }
  return s.value();
}

double cost_PM(const Matrix& c, const AuxiliaryIntegrals& aux, const std::vector<std::size_t>& window,
               double weight) {
  require_pm_sections(aux);
  if (aux.ao_overlap->rows() != c.rows()) throw InputError("overlap does not match MO coefficient rows");
  const Matrix cw = window_columns(c, resolve_window(window, static_cast<std::size_t>(c.cols())));
  const auto sa = atom_overlaps(aux);
  AccurateSum cost;
  for (std::size_t atom = 0; atom < sa.size(); ++atom) {
    const double population = (cw.transpose() * sa[atom] * cw).trace();
    const double q = (*aux.atomic_numbers)[atom] - weight * population;
    cost += q * q;
  }
  return cost.value();
}

double pm_orbital_locality(const Matrix& c, const AuxiliaryIntegrals& aux,
                           const std::vector<std::size_t>& window) {
  require_pm_sections(aux);
  if (aux.ao_overlap->rows() != c.rows()) throw InputError("overlap does not match MO coefficient rows");
  const Matrix cw = window_columns(c, resolve_window(window, static_cast<std::size_t>(c.cols())));
  AccurateSum s;
  for (const Matrix& sa : atom_overlaps(aux)) {
    const Matrix p = cw.transpose() * sa * cw;
    for (Eigen::Index a = 0; a < p.rows(); ++a) s += p(a, a) * p(a, a);
  }
  return s.value();
}

LocalizationResult localize(const MolecularHamiltonian& h, const std::optional<Matrix>& c_current,
                            const AuxiliaryIntegrals& aux, const LocalizationRequest& request) {
  const std::size_t n = h.n_orbitals();
  if (request.max_sweeps < 0) throw InputError("max_sweeps must be non-negative");
  if (!(request.convergence_tol > 0.0)) throw InputError("convergence_tol must be positive");

  const Matrix* c = c_current ? &*c_current : (aux.mo_coefficients ? &*aux.mo_coefficients : nullptr);
  if (c && static_cast<std::size_t>(c->cols()) != n) {
    throw InputError("MO coefficients have " + std::to_string(c->cols()) + " columns, H has N=" +
                     std::to_string(n));
  }

  LocalizationResult result{OrbitalRotation::identity(n), h, {}, 0, true};
  switch (request.scheme) {
    case LocalizationScheme::OAO: {
      if (!aux.ao_overlap) throw InputError("OAO needs the OVERLAP section");
      const Matrix& s = *aux.ao_overlap;
      if (static_cast<std::size_t>(s.rows()) != n) {
        throw InputError("OAO needs the full AO space: " + std::to_string(s.rows()) + " AOs vs N=" +
                         std::to_string(n));
      }
      const Matrix c_mo = c ? *c : Matrix::Identity(ix(n), ix(n));
      // C_oao = S^{-1/2} = C U  =>  U = C^T S S^{-1/2}.
      Matrix u = c_mo.transpose() * s * lowdin_orthogonalize(s);
      result.rotation = OrbitalRotation(std::move(u), 1e-8);
      result.hamiltonian = rotate_hamiltonian(h, result.rotation);
      return result;
    }
    case LocalizationScheme::ER: {
      const auto window = resolve_window(request.window, n);
      EdmistonRuedenberg objective(h, window);
      result = jacobi_sweeps(h, window, objective, request);
      break;
    }
    case LocalizationScheme::FB: {
      require_fb_sections(aux);
      if (!c) throw InputError("Foster-Boys needs MO coefficients");
      const auto window = resolve_window(request.window, n);
      const Matrix cw = window_columns(*c, window);
      std::vector<Matrix> mats;
      for (const Matrix& d : *aux.dipole_ao) mats.push_back(cw.transpose() * d * cw);
      SquaredDiagonals objective(std::move(mats));
      result = jacobi_sweeps(h, window, objective, request);
      break;
    }
    case LocalizationScheme::PM: {
      require_pm_sections(aux);
      if (!c) throw InputError("Pipek-Mezey needs MO coefficients");
      const auto window = resolve_window(request.window, n);
      const Matrix cw = window_columns(*c, window);
      std::vector<Matrix> mats;
      for (const Matrix& sa : atom_overlaps(aux)) mats.push_back(cw.transpose() * sa * cw);
      SquaredDiagonals objective(std::move(mats));
      result = jacobi_sweeps(h, window, objective, request);
      break;
    }
  }

  const double before = lambda_C(h), after = lambda_C(result.hamiltonian);
  if (std::abs(before - after) > 1e-8 * std::max(1.0, before)) {
    throw NumericalError("localization changed lambda_C; rotation lost orthogonality");
  }
  return result;
}

}  // namespace onenorm
