#include "onenorm/qubit_oracle.hpp"

#include "onenorm/error.hpp"
#include "onenorm/summation.hpp"

#include <array>
#include <bit>
#include <cmath>

namespace onenorm {

namespace {

using Complex = std::complex<double>;

// Operators in "XZ form": coefficient * X^x Z^z (X factors to the left).
struct XZTerm {
  std::uint32_t x;
  std::uint32_t z;
  Complex c;
};

// X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}.
XZTerm product(const XZTerm& a, const XZTerm& b) {
  const double sign = (std::popcount(a.z & b.x) & 1) ? -1.0 : 1.0;
  return {a.x ^ b.x, a.z ^ b.z, sign * a.c * b.c};
}

// Jordan-Wigner ladder operators, two XZ terms each:
//   a_j   = Z_{<j} X_j (I - Z_j) / 2
//   a^+_j = Z_{<j} (I - Z_j) X_j / 2 = Z_{<j} X_j (I + Z_j) / 2
std::array<XZTerm, 2> ladder(std::size_t j, bool create) {
  const std::uint32_t bit = 1u << j;
  const std::uint32_t below = bit - 1u;
  return {XZTerm{bit, below, 0.5}, XZTerm{bit, below | bit, create ? 0.5 : -0.5}};
}

Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

class XZAccumulator {
 public:
  void add(std::uint32_t x, std::uint32_t z, Complex c) { terms_[{x, z}] += c; }
  const std::map<std::pair<std::uint32_t, std::uint32_t>, Complex>& terms() const { return terms_; }

 private:
  std::map<std::pair<std::uint32_t, std::uint32_t>, Complex> terms_;
};

}  // namespace

std::string PauliString::to_string(std::size_t n_qubits) const {
  std::string s(n_qubits, 'I');
  for (std::size_t j = 0; j < n_qubits; ++j) {
    const bool bx = (x >> j) & 1u, bz = (z >> j) & 1u;
    s[j] = bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }
  return s;
}

PauliString PauliString::from_string(const std::string& s) {
  if (s.size() > 32) throw InputError("Pauli string longer than 32 qubits");
  PauliString p;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const std::uint32_t bit = 1u << j;
    switch (s[j]) {
      case 'I': break;
      case 'X': p.x |= bit; break;
      case 'Y': p.x |= bit; p.z |= bit; break;
      case 'Z': p.z |= bit; break;
      default: throw InputError(std::string("invalid Pauli character '") + s[j] + "'");
    }
  }
  return p;
}

std::pair<std::complex<double>, PauliString> multiply(const PauliString& a, const PauliString& b) {
  // Pauli string P(x,z) = i^{|x&z|} X^x Z^z.
  const int ya = std::popcount(a.x & a.z), yb = std::popcount(b.x & b.z);
  const PauliString r{a.x ^ b.x, a.z ^ b.z};
  const int yr = std::popcount(r.x & r.z);
  const int sign = std::popcount(a.z & b.x) & 1;
  // X^xa Z^za X^xb Z^zb = (-1)^sign X^xr Z^zr, and X^xr Z^zr = i^{-yr} P(r).
  return {i_power(ya + yb - yr + 2 * sign), r};
}

double PauliTermSum::identity_coefficient() const {
  const auto it = terms.find(PauliString{});
  return it == terms.end() ? 0.0 : it->second;
}

PauliTermSum jordan_wigner_expand(const MolecularHamiltonian& h) {
  const std::size_t n = h.n_orbitals();
  if (n > kMaxOracleOrbitals) {
    throw InputError("Pauli expansion limited to N <= " + std::to_string(kMaxOracleOrbitals) +
                     " orbitals (got " + std::to_string(n) + ")");
  }
  const std::size_t n_qubits = 2 * n;
  XZAccumulator acc;
  acc.add(0, 0, h.core_constant());

  auto qubit = [](std::size_t p, std::size_t sigma) { return 2 * p + sigma; };

  // sum_pq h_pq sum_sigma a+_{p sigma} a_{q sigma}
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const double v = h.h(p, q);
      if (v == 0.0) continue;
      for (std::size_t sigma = 0; sigma < 2; ++sigma) {
        for (const auto& t1 : ladder(qubit(p, sigma), true))
          for (const auto& t2 : ladder(qubit(q, sigma), false)) {
            const XZTerm t = product(t1, t2);
            acc.add(t.x, t.z, v * t.c);
          }
      }
    }

  // 1/2 sum_pqrs g_pqrs sum_{sigma tau} a+_{p sigma} a+_{r tau} a_{s tau} a_{q sigma}
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = 0.5 * h.g(p, q, r, s);
          if (v == 0.0) continue;
          for (std::size_t sigma = 0; sigma < 2; ++sigma)
            for (std::size_t tau = 0; tau < 2; ++tau) {
              const std::size_t i = qubit(p, sigma), j = qubit(r, tau);
              const std::size_t k = qubit(s, tau), l = qubit(q, sigma);
              if (i == j || k == l) continue;  // a+ a+ or a a on one mode vanishes
              for (const auto& t1 : ladder(i, true))
                for (const auto& t2 : ladder(j, true)) {
                  const XZTerm t12 = product(t1, t2);
                  for (const auto& t3 : ladder(k, false))
                    for (const auto& t4 : ladder(l, false)) {
                      const XZTerm t = product(product(t12, t3), t4);
                      acc.add(t.x, t.z, v * t.c);
                    }
                }
            }
        }

  PauliTermSum out;
  out.n_qubits = n_qubits;
  for (const auto& [key, c] : acc.terms()) {
    const PauliString p{key.first, key.second};
    // X^x Z^z = i^{-|x&z|} P(x,z).
    const Complex coeff = c * i_power(-std::popcount(p.x & p.z));
    if (std::abs(coeff) < 1e-14) continue;
    if (std::abs(coeff.imag()) > 1e-12 * std::max(1.0, std::abs(coeff.real()))) {
      throw NumericalError("Pauli coefficient of " + p.to_string(n_qubits) +
                           " is not real; Hamiltonian is not Hermitian");
    }
    if (std::abs(coeff.real()) < 1e-14) continue;
    out.terms.emplace(p, coeff.real());
  }
  return out;
}

double lambda_Q_oracle(const PauliTermSum& t, bool include_identity) {
  AccurateSum s;
  for (const auto& [p, c] : t.terms) {
    if (p.is_identity() && !include_identity) continue;
    s += std::abs(c);
  }
  return s.value();
}

std::size_t sparsity_count(const PauliTermSum& t) {
  std::size_t count = 0;
  for (const auto& [p, c] : t.terms)
    if (!p.is_identity() && std::abs(c) > 1e-12) ++count;
  return count;
}

ComplexMatrix dense_matrix(const PauliTermSum& t) {
  if (t.n_qubits > kMaxDenseQubits) {
    throw InputError("dense matrix limited to " + std::to_string(kMaxDenseQubits) + " qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << t.n_qubits;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const auto& [p, c] : t.terms) {
    // P(x,z) |b> = i^{|x&z|} (-1)^{|z&b|} |b ^ x>.
    const Complex phase = c * i_power(std::popcount(p.x & p.z));
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto ub = static_cast<std::uint32_t>(b);
      const double sign = (std::popcount(p.z & ub) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(ub ^ p.x), b) += sign * phase;
    }
  }
  return m;
}

double determinant_expectation(const PauliTermSum& t, std::uint32_t occupation) {
  if (t.n_qubits < 32 && (occupation >> t.n_qubits) != 0) {
    throw InputError("occupation pattern has bits beyond the qubit count");
  }
  AccurateSum s;
  for (const auto& [p, c] : t.terms) {
    if (p.x != 0) continue;  // off-diagonal in the computational basis
    s += (std::popcount(p.z & occupation) & 1) ? -c : c;
  }
  return s.value();
}

double determinant_expectation(const ComplexMatrix& m, std::uint32_t occupation) {
  const auto b = static_cast<Eigen::Index>(occupation);
  if (b >= m.rows()) throw InputError("occupation pattern outside the matrix dimension");
  return m(b, b).real();
}

}  // namespace onenorm
