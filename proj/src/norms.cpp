#include "onenorm/norms.hpp"

#include "onenorm/error.hpp"
#include "onenorm/summation.hpp"

#include <algorithm>
#include <cmath>

namespace onenorm {

double lambda_C(const MolecularHamiltonian& h) {
  const std::size_t n = h.n_orbitals();
  AccurateSum s;
  for (std::size_t p = 0; p < n; ++p) {
    s += h.h(p, p);
    for (std::size_t r = 0; r < n; ++r) {
      s += 0.5L * h.g(p, p, r, r);
      s += -0.25L * h.g(p, r, r, p);
    }
  }
  return std::abs(s.value());
}

double lambda_T(const MolecularHamiltonian& h) {
  const std::size_t n = h.n_orbitals();
  AccurateSum total;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      AccurateSum t;
      t += h.h(p, q);
      for (std::size_t r = 0; r < n; ++r) {
        t += h.g(p, q, r, r);
        t += -0.5L * h.g(p, r, r, q);
      }
      total += std::abs(t.value());
    }
  return total.value();
}

double lambda_V_lee(const MolecularHamiltonian& h) {
  // Each stored representative stands for its symmetry images; count them.
  const std::size_t n = h.n_orbitals();
  AccurateSum s;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t t = 0; t < n; ++t) s += std::abs(h.g(p, q, r, t));
  return 0.5 * s.value();
}

double lambda_V_prime(const MolecularHamiltonian& h) {
  const std::size_t n = h.n_orbitals();
  AccurateSum exchange;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t s = q + 1; s < n; ++s)
          exchange += std::abs(h.g(p, q, r, s) - h.g(p, s, r, q));
  AccurateSum total;
  total += 0.5L * exchange.value();
  total += 0.5L * lambda_V_lee(h);
  return total.value();
}

double lambda_Q(const MolecularHamiltonian& h) { return lambda_T(h) + lambda_V_prime(h); }

double CholeskyFactorization::reconstruction_error(const TwoBodyTensor& g) const {
  const std::size_t n = g.n_orbitals();
  double worst = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          long double approx = 0.0L;
          for (const Matrix& l : vectors) {
            approx += static_cast<long double>(l(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q))) *
                      l(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
          }
          worst = std::max(worst, std::abs(g(p, q, r, s) - static_cast<double>(approx)));
        }
  return worst;
}

CholeskyFactorization cholesky_decompose(const MolecularHamiltonian& h, double tolerance) {
  if (!(tolerance > 0.0)) throw InputError("Cholesky tolerance must be positive");
  const TwoBodyTensor& g = h.two_body();
  const std::size_t n = g.n_orbitals();
  const std::size_t np = g.n_pairs();
  const double slack = -10.0 * tolerance;

  // Pair index -> (p, q) with p >= q.
  std::vector<std::pair<std::size_t, std::size_t>> pairs(np);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) pairs[pair_index(p, q)] = {p, q};

  std::vector<double> diag(np);
  for (std::size_t a = 0; a < np; ++a) diag[a] = g.pair_element(a, a);
  std::vector<std::vector<double>> columns;  // in pair space

  auto check_psd = [&] {
    for (std::size_t a = 0; a < np; ++a) {
      if (diag[a] < slack) {
        throw NumericalError("not positive semi-definite: residual diagonal " +
                             std::to_string(diag[a]) + " at pair " + std::to_string(a));
      }
    }
  };

  check_psd();
  double residual = np ? *std::max_element(diag.begin(), diag.end()) : 0.0;
  while (residual > tolerance && columns.size() < np) {
    const auto pivot = static_cast<std::size_t>(
        std::max_element(diag.begin(), diag.end()) - diag.begin());
    const double root = std::sqrt(diag[pivot]);
    std::vector<double> col(np);
    for (std::size_t a = 0; a < np; ++a) {
      long double v = g.pair_element(a, pivot);
      for (const auto& prev : columns) v -= static_cast<long double>(prev[a]) * prev[pivot];
      col[a] = static_cast<double>(v) / root;
    }
    for (std::size_t a = 0; a < np; ++a) diag[a] -= col[a] * col[a];
    diag[pivot] = 0.0;
    columns.push_back(std::move(col));
    check_psd();
    residual = *std::max_element(diag.begin(), diag.end());
  }

  CholeskyFactorization f;
  f.tolerance = tolerance;
  f.residual = std::max(0.0, residual);
  f.vectors.reserve(columns.size());
  const auto dim = static_cast<Eigen::Index>(n);
  for (const auto& col : columns) {
    Matrix l(dim, dim);
    for (std::size_t a = 0; a < np; ++a) {
      const auto [p, q] = pairs[a];
      l(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = col[a];
      l(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) = col[a];
    }
    f.vectors.push_back(std::move(l));
  }
  return f;
}

double lambda_SF(const CholeskyFactorization& f) {
  AccurateSum s;
  for (const Matrix& l : f.vectors) {
    AccurateSum inner;
    for (Eigen::Index i = 0; i < l.size(); ++i) inner += std::abs(l.data()[i]);
    const long double v = inner.value();
    s += v * v;
  }
  return 0.25 * s.value();
}

NormReport norm_report(const MolecularHamiltonian& h, bool with_cholesky,
                       double cholesky_tolerance) {
  NormReport r;
  r.n_orbitals = h.n_orbitals();
  r.lambda_C = lambda_C(h);
  r.lambda_T = lambda_T(h);
  r.lambda_V_lee = lambda_V_lee(h);
  r.lambda_V_prime = lambda_V_prime(h);
  r.lambda_Q_no_const = r.lambda_T + r.lambda_V_prime;
  r.lambda_Q_full = r.lambda_C + r.lambda_T + r.lambda_V_prime;
  r.lambda_lee = r.lambda_T + r.lambda_V_lee;
  if (with_cholesky) r.lambda_SF = lambda_SF(cholesky_decompose(h, cholesky_tolerance));
  r.class_sums = class_decomposition(h);
  return r;
}

nlohmann::ordered_json to_json(const IntegralClassSums& c) {
  nlohmann::ordered_json j;
  for (std::size_t i = 0; i < c.sums.size(); ++i) j[c.names[i]] = c.sums[i];
  return j;
}

nlohmann::ordered_json to_json(const NormReport& r) {
  nlohmann::ordered_json j;
  j["n_orbitals"] = r.n_orbitals;
  j["lambda_C"] = r.lambda_C;
  j["lambda_T"] = r.lambda_T;
  j["lambda_V_lee"] = r.lambda_V_lee;
  j["lambda_V_prime"] = r.lambda_V_prime;
  j["lambda_Q_no_const"] = r.lambda_Q_no_const;
  j["lambda_Q_full"] = r.lambda_Q_full;
  j["lambda_lee"] = r.lambda_lee;
  if (r.lambda_SF) j["lambda_SF"] = *r.lambda_SF;
  else j["lambda_SF"] = nullptr;
  j["class_sums"] = to_json(r.class_sums);
  return j;
}

}  // namespace onenorm
