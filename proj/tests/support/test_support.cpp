#include "test_support.hpp"

#include <bit>
#include <cmath>
#include <filesystem>

#ifndef ONENORM_FIXTURE_DIR
#define ONENORM_FIXTURE_DIR "tests/fixtures"
#endif

namespace onenorm::testing {

namespace {

double normal(Rng& rng) {
  static thread_local std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

TwoBodyTensor pack(const DenseTensor& d) {
  TwoBodyTensor g(d.n);
  for (std::size_t p = 0; p < d.n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r < d.n; ++r)
        for (std::size_t s = 0; s <= r; ++s)
          if (pair_index(p, q) >= pair_index(r, s)) g.set(p, q, r, s, d(p, q, r, s));
  return g;
}

// Applies a_j (create = false) or a^+_j to |b>. Returns 0 when the result vanishes.
int apply_ladder(std::uint32_t& b, std::size_t j, bool create) {
  const std::uint32_t bit = 1u << j;
  const bool occupied = (b & bit) != 0;
  if (occupied == create) return 0;
  const int sign = (std::popcount(b & (bit - 1u)) % 2) ? -1 : 1;
  b ^= bit;
  return sign;
}

}  // namespace

DenseTensor dense_of(const TwoBodyTensor& g) {
  DenseTensor d(g.n_orbitals());
  for (std::size_t p = 0; p < d.n; ++p)
    for (std::size_t q = 0; q < d.n; ++q)
      for (std::size_t r = 0; r < d.n; ++r)
        for (std::size_t s = 0; s < d.n; ++s) d(p, q, r, s) = g(p, q, r, s);
  return d;
}

MolecularHamiltonian random_hamiltonian(std::size_t n, Rng& rng, double scale, double core,
                                        std::optional<int> n_electrons) {
  Matrix h(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) h(p, q) = h(q, p) = scale * normal(rng);
  TwoBodyTensor g(n);
  for (double& v : g.packed()) v = scale * normal(rng);
  return MolecularHamiltonian(core, std::move(h), std::move(g), n_electrons);
}

MolecularHamiltonian random_psd_hamiltonian(std::size_t n, std::size_t rank, Rng& rng) {
  DenseTensor d(n);
  for (std::size_t k = 0; k < rank; ++k) {
    Matrix a(n, n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q <= p; ++q) a(p, q) = a(q, p) = normal(rng);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) d(p, q, r, s) += a(p, q) * a(r, s);
  }
  Matrix h(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) h(p, q) = h(q, p) = normal(rng);
  return MolecularHamiltonian(0.0, std::move(h), pack(d));
}

Matrix random_orthogonal(std::size_t n, Rng& rng) {
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return q;
}

std::vector<double> random_params(std::size_t count, Rng& rng, double scale) {
  std::vector<double> v(count);
  for (double& x : v) x = scale * normal(rng);
  return v;
}

DenseTensor naive_transform_two_body(const DenseTensor& g, const Matrix& c) {
  const std::size_t m = g.n, n = static_cast<std::size_t>(c.cols());
  DenseTensor out(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          double acc = 0.0;
          for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
              for (std::size_t cc = 0; cc < m; ++cc)
                for (std::size_t d = 0; d < m; ++d)
                  acc += g(a, b, cc, d) * c(a, p) * c(b, q) * c(cc, r) * c(d, s);
          out(p, q, r, s) = acc;
        }
  return out;
}

Matrix naive_transform_one_body(const Matrix& h, const Matrix& c) {
  const auto m = h.rows(), n = c.cols();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) out(p, q) += h(a, b) * c(a, p) * c(b, q);
  return out;
}

Eigen::MatrixXcd fermionic_dense_matrix(const MolecularHamiltonian& h) {
  const std::size_t n = h.n_orbitals();
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto ket = static_cast<std::uint32_t>(col);
    m(col, col) += h.core_constant();
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t sigma = 0; sigma < 2; ++sigma) {
          std::uint32_t b = ket;
          int sign = apply_ladder(b, 2 * q + sigma, false);
          if (!sign) continue;
          sign *= apply_ladder(b, 2 * p + sigma, true);
          if (!sign) continue;
          m(static_cast<Eigen::Index>(b), col) += sign * h.h(p, q);
        }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            const double v = 0.5 * h.g(p, q, r, s);
            if (v == 0.0) continue;
            for (std::size_t sigma = 0; sigma < 2; ++sigma)
              for (std::size_t tau = 0; tau < 2; ++tau) {
                std::uint32_t b = ket;
                int sign = apply_ladder(b, 2 * q + sigma, false);
                if (sign) sign *= apply_ladder(b, 2 * s + tau, false);
                if (sign) sign *= apply_ladder(b, 2 * r + tau, true);
                if (sign) sign *= apply_ladder(b, 2 * p + sigma, true);
                if (sign) m(static_cast<Eigen::Index>(b), col) += sign * v;
              }
          }
  }
  return m;
}

double slater_energy(const MolecularHamiltonian& h, std::uint32_t occupation) {
  std::vector<std::size_t> occ;
  for (std::size_t j = 0; j < 2 * h.n_orbitals(); ++j)
    if ((occupation >> j) & 1u) occ.push_back(j);
  double e = h.core_constant();
  for (std::size_t i : occ) e += h.h(i / 2, i / 2);
  for (std::size_t i : occ)
    for (std::size_t j : occ) {
      const std::size_t a = i / 2, b = j / 2;
      e += 0.5 * h.g(a, a, b, b);
      if (i % 2 == j % 2) e -= 0.5 * h.g(a, b, b, a);
    }
  return e;
}

AuxiliaryIntegrals random_aux(std::size_t n_ao, std::size_t n_atoms, Rng& rng) {
  AuxiliaryIntegrals aux;
  Matrix a(n_ao, n_ao);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  Matrix s = 0.3 * a * a.transpose() / static_cast<double>(n_ao) + Matrix::Identity(n_ao, n_ao);
  // Unit diagonal like a normalized AO basis.
  const Vector d = s.diagonal().cwiseSqrt().cwiseInverse();
  s = d.asDiagonal() * s * d.asDiagonal();
  aux.ao_overlap = s;

  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const Matrix s_inv_half =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  aux.mo_coefficients = s_inv_half * random_orthogonal(n_ao, rng);

  std::array<Matrix, 3> dip;
  for (auto& m : dip) {
    Matrix r(n_ao, n_ao);
    for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = normal(rng);
    m = 0.5 * (r + r.transpose());
  }
  aux.dipole_ao = dip;

  std::vector<int> map(n_ao);
  for (std::size_t mu = 0; mu < n_ao; ++mu) map[mu] = static_cast<int>(mu * n_atoms / n_ao);
  aux.ao_to_atom = map;
  std::vector<int> z(n_atoms);
  for (std::size_t k = 0; k < n_atoms; ++k) z[k] = 1 + static_cast<int>(k % 3);
  aux.atomic_numbers = z;
  return aux;
}

MolecularHamiltonian hamiltonian_for_aux(const AuxiliaryIntegrals& aux, Rng& rng) {
  const std::size_t m = aux.n_ao();
  const auto ao = random_psd_hamiltonian(m, m, rng);
  const Matrix& c = *aux.mo_coefficients;
  const auto g_mo = naive_transform_two_body(dense_of(ao.two_body()), c);
  const Matrix h_mo = naive_transform_one_body(ao.one_body(), c);
  const Matrix h_sym = 0.5 * (h_mo + h_mo.transpose());
  return MolecularHamiltonian(0.0, h_sym, pack(g_mo));
}

std::string fixture_path(const std::string& name) { return std::string(ONENORM_FIXTURE_DIR) + "/" + name; }

bool fixture_exists(const std::string& name) { return std::filesystem::exists(fixture_path(name)); }

}  // namespace onenorm::testing
