#include "onenorm/transform.hpp"

#include "onenorm/error.hpp"
#include "onenorm/norms.hpp"
#include "onenorm/summation.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace onenorm {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

// ---------------------------------------------------------- rotations

OrbitalRotation::OrbitalRotation(Matrix u, double tolerance) : u_(std::move(u)) {
  if (u_.rows() != u_.cols()) throw InputError("rotation matrix must be square");
  if (!u_.allFinite()) throw InputError("rotation matrix contains non-finite values");
  if (u_.size() > 0) {
    const double err =
        (u_.transpose() * u_ - Matrix::Identity(u_.rows(), u_.cols())).cwiseAbs().maxCoeff();
    if (err > tolerance) {
      throw InputError("rotation matrix is not orthogonal (||U^T U - I||_max = " +
                       std::to_string(err) + ")");
    }
  }
}

OrbitalRotation OrbitalRotation::identity(std::size_t n) {
  return OrbitalRotation(Matrix::Identity(ix(n), ix(n)));
}

OrbitalRotation OrbitalRotation::then(const OrbitalRotation& next) const {
  if (next.dimension() != dimension()) throw InputError("rotation dimensions differ");
  return OrbitalRotation(u_ * next.u_);
}

AntisymmetricGenerator::AntisymmetricGenerator(std::size_t dimension, std::vector<double> params)
    : n_(dimension), params_(std::move(params)) {
  if (params_.size() != parameter_count(n_)) {
    throw InputError("generator of dimension " + std::to_string(n_) + " needs " +
                     std::to_string(parameter_count(n_)) + " parameters, got " +
                     std::to_string(params_.size()));
  }
  for (double v : params_)
    if (!std::isfinite(v)) throw InputError("generator parameters must be finite");
}

AntisymmetricGenerator AntisymmetricGenerator::zero(std::size_t dimension) {
  return AntisymmetricGenerator(dimension, std::vector<double>(parameter_count(dimension), 0.0));
}

Matrix AntisymmetricGenerator::matrix() const {
  Matrix k = Matrix::Zero(ix(n_), ix(n_));
  std::size_t idx = 0;
  for (std::size_t p = 0; p < n_; ++p)
    for (std::size_t q = p + 1; q < n_; ++q) {
      k(ix(p), ix(q)) = params_[idx];
      k(ix(q), ix(p)) = -params_[idx];
      ++idx;
    }
  return k;
}

OrbitalRotation exp_generator(const AntisymmetricGenerator& k) {
  if (k.dimension() == 0) return OrbitalRotation(Matrix(0, 0));
  if (std::all_of(k.params().begin(), k.params().end(), [](double v) { return v == 0.0; })) {
    return OrbitalRotation::identity(k.dimension());
  }
  // Eigen's exp() is Pade-13 scaling and squaring.
  const Matrix minus_k = -k.matrix();
  Matrix u = minus_k.exp();
  return OrbitalRotation(std::move(u), 1e-10);
}

OrbitalRotation embed_rotation(const OrbitalRotation& local, std::span<const std::size_t> window,
                               std::size_t n) {
  if (local.dimension() != window.size()) {
    throw InputError("rotation dimension does not match window size");
  }
  for (std::size_t i : window)
    if (i >= n) throw InputError("window index out of range");
  Matrix u = Matrix::Identity(ix(n), ix(n));
  for (std::size_t a = 0; a < window.size(); ++a) {
    for (std::size_t b = 0; b < window.size(); ++b) {
      u(ix(window[a]), ix(window[b])) = local.matrix()(ix(a), ix(b));
    }
  }
  return OrbitalRotation(std::move(u));
}

OrbitalRotation jacobi_rotation(std::size_t n, std::size_t p, std::size_t q, double theta) {
  if (p == q || p >= n || q >= n) throw InputError("Jacobi rotation needs two distinct valid orbitals");
  Matrix u = Matrix::Identity(ix(n), ix(n));
  const double c = std::cos(theta), s = std::sin(theta);
  u(ix(p), ix(p)) = c;
  u(ix(p), ix(q)) = s;
  u(ix(q), ix(p)) = -s;
  u(ix(q), ix(q)) = c;
  return OrbitalRotation(std::move(u));
}

// ---------------------------------------------------- integral transforms

Matrix transform_one_body(const Matrix& h, const Matrix& c) {
  if (h.rows() != h.cols() || c.rows() != h.rows()) {
    throw InputError("one-body transform: h is " + std::to_string(h.rows()) + "x" +
                     std::to_string(h.cols()) + " but C has " + std::to_string(c.rows()) +
                     " rows");
  }
  return c.transpose() * h * c;
}

TwoBodyTensor transform_two_body(const TwoBodyTensor& g, const Matrix& c) {
  const auto m = static_cast<Eigen::Index>(g.n_orbitals());
  if (c.rows() != m) {
    throw InputError("two-body transform: tensor has " + std::to_string(m) +
                     " orbitals but C has " + std::to_string(c.rows()) + " rows");
  }
  const Eigen::Index n = c.cols();

  // Each stage contracts the last (fastest) index and writes the new index
  // first: [a b c d] -> [s a b c] -> [r s a b] -> [q r s a] -> [p q r s].
  std::vector<double> buf = g.to_dense();
  Eigen::Index dims[4] = {m, m, m, m};
  for (int stage = 0; stage < 4; ++stage) {
    const Eigen::Index last = dims[3];
    const Eigen::Index rest = dims[0] * dims[1] * dims[2];
    std::vector<double> out(static_cast<std::size_t>(rest * n));
    Eigen::Map<const Matrix> a(buf.data(), last, rest);
    Eigen::Map<Matrix> r(out.data(), rest, n);
    r.noalias() = a.transpose() * c;
    buf.swap(out);
    dims[3] = dims[2];
    dims[2] = dims[1];
    dims[1] = dims[0];
    dims[0] = n;
  }

  double scale = 1.0;
  for (double v : buf) scale = std::max(scale, std::abs(v));
  return TwoBodyTensor::from_dense(buf, static_cast<std::size_t>(n), 1e-8 * scale);
}

MolecularHamiltonian rotate_hamiltonian(const MolecularHamiltonian& h, const OrbitalRotation& u) {
  if (u.dimension() != h.n_orbitals()) {
    throw InputError("rotation dimension " + std::to_string(u.dimension()) +
                     " does not match N=" + std::to_string(h.n_orbitals()));
  }
  Matrix h1 = symmetrized(transform_one_body(h.one_body(), u.matrix()));
  TwoBodyTensor g = transform_two_body(h.two_body(), u.matrix());
  return MolecularHamiltonian(h.core_constant(), std::move(h1), std::move(g), h.n_electrons());
}

std::vector<double> jacobi_rotation_norm_scan(const MolecularHamiltonian& h, std::size_t p,
                                              std::size_t q, std::span<const double> thetas) {
  std::vector<double> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    out.push_back(lambda_Q(rotate_hamiltonian(h, jacobi_rotation(h.n_orbitals(), p, q, theta))));
  }
  return out;
}

// ------------------------------------------------------------ frozen core

FrozenCoreResult freeze_core(const MolecularHamiltonian& h, const ActiveSpaceSpec& spec) {
  spec.validate(h.n_orbitals());
  const auto& frozen = spec.frozen;
  const auto& active = spec.active;
  const std::size_t na = active.size();

  AccurateSum shift;
  for (std::size_t i : frozen) {
    shift += 2.0L * h.h(i, i);
    for (std::size_t j : frozen) shift += 2.0L * h.g(i, i, j, j) - h.g(i, j, j, i);
  }

  Matrix h1(ix(na), ix(na));
  for (std::size_t t = 0; t < na; ++t)
    for (std::size_t u = 0; u < na; ++u) {
      AccurateSum v;
      v += h.h(active[t], active[u]);
      for (std::size_t i : frozen) {
        v += 2.0L * h.g(active[t], active[u], i, i) - h.g(active[t], i, i, active[u]);
      }
      h1(ix(t), ix(u)) = v.value();
    }
  h1 = symmetrized(h1);

  TwoBodyTensor g(na);
  for (std::size_t t = 0; t < na; ++t)
    for (std::size_t u = 0; u <= t; ++u)
      for (std::size_t v = 0; v < na; ++v)
        for (std::size_t w = 0; w <= v; ++w)
          g.set(t, u, v, w, h.g(active[t], active[u], active[v], active[w]));

  const double e_frozen = shift.value();
  std::optional<int> n_elec;
  if (h.n_electrons()) n_elec = spec.n_active_electrons;
  return FrozenCoreResult{
      MolecularHamiltonian(h.core_constant() + e_frozen, std::move(h1), std::move(g), n_elec),
      e_frozen};
}

Matrix lowdin_orthogonalize(const Matrix& s) {
  if (s.rows() != s.cols()) throw InputError("overlap matrix must be square");
  if (s.size() == 0) return Matrix(0, 0);
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InputError("overlap matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(s));
  if (eig.eigenvalues().minCoeff() < 1e-10) throw InputError("near-singular overlap");
  const Vector inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  return symmetrized(eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose());
}

}  // namespace onenorm
