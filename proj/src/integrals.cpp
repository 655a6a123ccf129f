#include "onenorm/integrals.hpp"

#include "onenorm/error.hpp"
#include "onenorm/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace onenorm {

TwoBodyTensor::TwoBodyTensor(std::size_t n_orbitals)
    : n_(n_orbitals), n_pairs_(n_orbitals * (n_orbitals + 1) / 2),
      data_(n_pairs_ * (n_pairs_ + 1) / 2, 0.0) {}

std::vector<double> TwoBodyTensor::to_dense() const {
  const std::size_t n = n_;
  std::vector<double> dense(n * n * n * n);
  std::size_t idx = 0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) dense[idx++] = (*this)(p, q, r, s);
  return dense;
}

TwoBodyTensor TwoBodyTensor::from_dense(std::span<const double> dense, std::size_t n,
                                        double symmetry_tol) {
  if (dense.size() != n * n * n * n) {
    throw InputError("dense two-body tensor has " + std::to_string(dense.size()) +
                     " entries, expected N^4 for N=" + std::to_string(n));
  }
  TwoBodyTensor t(n);
  auto at = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return dense[((p * n + q) * n + r) * n + s];
  };
  double worst = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (pair_index(p, q) < pair_index(r, s)) continue;
          const double v = at(p, q, r, s);
          const double images[7] = {at(q, p, r, s), at(p, q, s, r), at(q, p, s, r),
                                    at(r, s, p, q), at(s, r, p, q), at(r, s, q, p),
                                    at(s, r, q, p)};
          for (double w : images) worst = std::max(worst, std::abs(w - v));
          t.set(p, q, r, s, v);
        }
  if (!(worst <= symmetry_tol)) {
    throw NumericalError("two-body tensor violates 8-fold symmetry by " + std::to_string(worst));
  }
  return t;
}

MolecularHamiltonian::MolecularHamiltonian(double core_constant, Matrix one_body,
                                           TwoBodyTensor two_body, std::optional<int> n_electrons)
    : core_(core_constant), one_body_(std::move(one_body)), two_body_(std::move(two_body)),
      n_electrons_(n_electrons) {
  const auto n = static_cast<Eigen::Index>(two_body_.n_orbitals());
  if (one_body_.rows() != n || one_body_.cols() != n) {
    throw InputError("one-body tensor is " + std::to_string(one_body_.rows()) + "x" +
                     std::to_string(one_body_.cols()) + ", two-body tensor has N=" +
                     std::to_string(n));
  }
  if (!std::isfinite(core_) || !one_body_.allFinite()) {
    throw InputError("Hamiltonian contains non-finite values");
  }
  for (double v : two_body_.packed()) {
    if (!std::isfinite(v)) throw InputError("Hamiltonian contains non-finite values");
  }
  if (n > 0 && (one_body_ - one_body_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InputError("one-body tensor is not symmetric");
  }
}

MolecularHamiltonian MolecularHamiltonian::zero(std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  return MolecularHamiltonian(0.0, Matrix::Zero(dim, dim), TwoBodyTensor(n));
}

MolecularHamiltonian MolecularHamiltonian::with_core_constant(double core) const {
  return MolecularHamiltonian(core, one_body_, two_body_, n_electrons_);
}

// ------------------------------------------------------------ auxiliary

std::size_t AuxiliaryIntegrals::n_ao() const {
  if (ao_overlap) return static_cast<std::size_t>(ao_overlap->rows());
  if (mo_coefficients) return static_cast<std::size_t>(mo_coefficients->rows());
  if (dipole_ao) return static_cast<std::size_t>((*dipole_ao)[0].rows());
  if (ao_to_atom) return ao_to_atom->size();
  return 0;
}

void AuxiliaryIntegrals::validate() const {
  const auto m = static_cast<Eigen::Index>(n_ao());
  auto require_square = [&](const Matrix& a, const char* what) {
    if (a.rows() != m || a.cols() != m) {
      throw InputError(std::string(what) + " is " + std::to_string(a.rows()) + "x" +
                       std::to_string(a.cols()) + ", expected " + std::to_string(m) + "x" +
                       std::to_string(m));
    }
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
      throw InputError(std::string(what) + " is not symmetric");
    }
  };
  if (ao_overlap) {
    require_square(*ao_overlap, "OVERLAP");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(*ao_overlap, Eigen::EigenvaluesOnly);
    if (m > 0 && eig.eigenvalues().minCoeff() <= 1e-10) {
      throw InputError("overlap not positive definite (smallest eigenvalue " +
                       std::to_string(eig.eigenvalues().minCoeff()) + ")");
    }
  }
  if (mo_coefficients && mo_coefficients->rows() != m) {
    throw InputError("MO_COEFF has " + std::to_string(mo_coefficients->rows()) +
                     " rows, expected " + std::to_string(m));
  }
  if (dipole_ao) {
    require_square((*dipole_ao)[0], "DIPOLE_X");
    require_square((*dipole_ao)[1], "DIPOLE_Y");
    require_square((*dipole_ao)[2], "DIPOLE_Z");
  }
  if (ao_to_atom) {
    if (static_cast<Eigen::Index>(ao_to_atom->size()) != m) {
      throw InputError("AO_ATOM_MAP has " + std::to_string(ao_to_atom->size()) +
                       " entries, expected " + std::to_string(m));
    }
    for (int a : *ao_to_atom) {
      if (a < 0) throw InputError("AO_ATOM_MAP contains a negative atom index");
      if (atomic_numbers && a >= static_cast<int>(atomic_numbers->size())) {
        throw InputError("AO_ATOM_MAP references atom " + std::to_string(a) + " but only " +
                         std::to_string(atomic_numbers->size()) + " atoms are declared");
      }
    }
  }
  if (ao_overlap && mo_coefficients) {
    const Matrix& c = *mo_coefficients;
    const Matrix ctsc = c.transpose() * (*ao_overlap) * c;
    const Matrix id = Matrix::Identity(c.cols(), c.cols());
    if (c.cols() > 0 && (ctsc - id).cwiseAbs().maxCoeff() > 1e-8) {
      throw InputError("MO coefficients are not orthonormal in the overlap metric");
    }
  }
}

// ----------------------------------------------------------- active space

void ActiveSpaceSpec::validate(std::size_t n) const {
  std::vector<int> seen(n, 0);
  for (const auto* list : {&frozen, &active, &virtual_orbitals}) {
    for (std::size_t i : *list) {
      if (i >= n) {
        throw InputError("orbital index " + std::to_string(i) + " out of range for N=" +
                         std::to_string(n));
      }
      if (seen[i]++) throw InputError("orbital " + std::to_string(i) + " listed twice");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw InputError("frozen/active/virtual lists do not cover every orbital");
  }
  if (n_active_electrons < 0 || n_active_electrons % 2 != 0) {
    throw InputError("active electron count must be even and non-negative");
  }
  if (static_cast<std::size_t>(n_active_electrons) > 2 * active.size()) {
    throw InputError("more active electrons than active spin orbitals");
  }
}

ActiveSpaceSpec ActiveSpaceSpec::around_fermi_level(std::size_t n, int n_electrons,
                                                    std::size_t n_active,
                                                    int n_active_electrons) {
  if (n_electrons < 0 || n_electrons % 2 != 0) {
    throw InputError("closed-shell window needs an even electron count");
  }
  if (n_active_electrons > n_electrons || (n_electrons - n_active_electrons) % 2 != 0) {
    throw InputError("active electron count incompatible with total electron count");
  }
  const std::size_t n_frozen = static_cast<std::size_t>((n_electrons - n_active_electrons) / 2);
  if (n_frozen + n_active > n) throw InputError("active space does not fit in the orbital set");
  ActiveSpaceSpec spec;
  spec.n_active_electrons = n_active_electrons;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_frozen) spec.frozen.push_back(i);
    else if (i < n_frozen + n_active) spec.active.push_back(i);
    else spec.virtual_orbitals.push_back(i);
  }
  spec.validate(n);
  return spec;
}

// ------------------------------------------------------- class sums

namespace {

// Index of the class for an ordered (p,q,r,s).
std::size_t integral_class(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
  std::array<std::size_t, 4> v{p, q, r, s};
  std::sort(v.begin(), v.end());
  const std::size_t distinct = static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  switch (distinct) {
    case 1:
      return 0;  // pppp
    case 2: {
      // 3+1 split -> pqqq; 2+2 split -> pqpq or ppqq.
      const std::size_t count_p = (p == q) + (p == r) + (p == s) + 1;
      if (count_p == 1 || count_p == 3) return 1;
      return p == q ? 3 : 2;
    }
    case 3:
      return (p == q || r == s) ? 5 : 4;  // pprs : pqrq
    default:
      return 6;  // pqrs
  }
}

}  // namespace

double IntegralClassSums::at(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (name == names[i]) return sums[i];
  throw InputError("unknown integral class '" + name + "'");
}

double IntegralClassSums::total() const {
  AccurateSum s;
  for (double v : sums) s += v;
  return s.value();
}

std::map<std::string, double> IntegralClassSums::as_map() const {
  std::map<std::string, double> m;
  for (std::size_t i = 0; i < names.size(); ++i) m[names[i]] = sums[i];
  return m;
}

IntegralClassSums class_decomposition(const MolecularHamiltonian& h) {
  const std::size_t n = h.n_orbitals();
  std::array<AccurateSum, 7> acc;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          acc[integral_class(p, q, r, s)] += std::abs(h.g(p, q, r, s));
  IntegralClassSums out;
  for (std::size_t i = 0; i < 7; ++i) out.sums[i] = acc[i].value();
  return out;
}

}  // namespace onenorm
