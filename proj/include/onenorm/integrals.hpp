#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace onenorm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Composite index of the unordered pair {p, q}.
constexpr std::size_t pair_index(std::size_t p, std::size_t q) noexcept {
  return p >= q ? p * (p + 1) / 2 + q : q * (q + 1) / 2 + p;
}

/// Real two-electron integrals (pq|rs) in chemist notation.
///
/// Only one representative per 8-fold symmetry class is stored: the element
/// at composite index pair_index(pair_index(p,q), pair_index(r,s)). Every
/// accessor resolves the symmetry at read time, so
/// (pq|rs) = (qp|rs) = (pq|sr) = (rs|pq) = ... holds by construction.
class TwoBodyTensor {
 public:
  TwoBodyTensor() = default;
  explicit TwoBodyTensor(std::size_t n_orbitals);

  std::size_t n_orbitals() const noexcept { return n_; }
  std::size_t n_pairs() const noexcept { return n_pairs_; }

  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[slot(p, q, r, s)];
  }
  void set(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double value) {
    data_[slot(p, q, r, s)] = value;
  }
  /// Element of the N(N+1)/2 square pair-space matrix.
  double pair_element(std::size_t pq, std::size_t rs) const { return data_[pair_index(pq, rs)]; }

  std::span<const double> packed() const noexcept { return data_; }
  std::span<double> packed() noexcept { return data_; }

  /// Full N^4 tensor, row-major in (p, q, r, s).
  std::vector<double> to_dense() const;
  /// Packs a dense row-major tensor. Throws NumericalError if any image of a
  /// symmetry class deviates from its representative by more than
  /// `symmetry_tol` (absolute).
  static TwoBodyTensor from_dense(std::span<const double> dense, std::size_t n_orbitals,
                                  double symmetry_tol);

  friend bool operator==(const TwoBodyTensor&, const TwoBodyTensor&) = default;

 private:
  std::size_t slot(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return pair_index(pair_index(p, q), pair_index(r, s));
  }

  std::size_t n_ = 0;
  std::size_t n_pairs_ = 0;
  std::vector<double> data_;
};

/// Spin-free electronic Hamiltonian: core constant, h_pq and (pq|rs).
/// Immutable once built; the constructor enforces the type invariants.
class MolecularHamiltonian {
 public:
  MolecularHamiltonian(double core_constant, Matrix one_body, TwoBodyTensor two_body,
                       std::optional<int> n_electrons = std::nullopt);

  static MolecularHamiltonian zero(std::size_t n_orbitals);

  std::size_t n_orbitals() const noexcept { return two_body_.n_orbitals(); }
  double core_constant() const noexcept { return core_; }
  const Matrix& one_body() const noexcept { return one_body_; }
  const TwoBodyTensor& two_body() const noexcept { return two_body_; }
  std::optional<int> n_electrons() const noexcept { return n_electrons_; }

  double h(std::size_t p, std::size_t q) const { return one_body_(p, q); }
  double g(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return two_body_(p, q, r, s);
  }

  MolecularHamiltonian with_core_constant(double core) const;

 private:
  double core_;
  Matrix one_body_;
  TwoBodyTensor two_body_;
  std::optional<int> n_electrons_;
};

/// AO-basis data consumed by the localization schemes. Every section is
/// optional; schemes check for what they need.
struct AuxiliaryIntegrals {
  std::optional<Matrix> ao_overlap;          // M x M
  std::optional<Matrix> mo_coefficients;     // M x N, AO -> MO
  std::optional<std::vector<int>> ao_to_atom;      // length M, 0-based atom index
  std::optional<std::vector<int>> atomic_numbers;  // one Z per atom
  std::optional<std::array<Matrix, 3>> dipole_ao;  // x, y, z position operator

  /// Number of AOs implied by the present sections (0 if none present).
  std::size_t n_ao() const;
  /// Cross-checks dimensions, overlap positive definiteness and MO
  /// orthonormality. Throws InputError.
  void validate() const;
};

/// Frozen / active / virtual partition of 0..N-1.
struct ActiveSpaceSpec {
  std::vector<std::size_t> frozen;
  std::vector<std::size_t> active;
  std::vector<std::size_t> virtual_orbitals;
  int n_active_electrons = 0;

  void validate(std::size_t n_orbitals) const;

  /// Window of `n_active` orbitals around the Fermi level for a closed-shell
  /// determinant with `n_electrons` electrons (orbitals assumed energy-ordered).
  static ActiveSpaceSpec around_fermi_level(std::size_t n_orbitals, int n_electrons,
                                            std::size_t n_active, int n_active_electrons);
};

// ---------------------------------------------------------------- FCIDUMP

/// Parses an FCIDUMP stream. Conflicting duplicates (same symmetry class,
/// values differing by more than 1e-10) are reported through `warnings`
/// when given; the last value read wins.
MolecularHamiltonian parse_fcidump(std::istream& in, std::vector<std::string>* warnings = nullptr);
MolecularHamiltonian parse_fcidump_file(const std::string& path,
                                        std::vector<std::string>* warnings = nullptr);

void write_fcidump(std::ostream& out, const MolecularHamiltonian& h);
void write_fcidump_file(const std::string& path, const MolecularHamiltonian& h);

// ------------------------------------------------------ labeled matrices

/// One `#SECTION <name> <rows> <cols>` block.
struct LabeledMatrix {
  std::string name;
  Matrix values;
};

/// Reads every section of a labeled-matrix text stream, in file order.
std::vector<LabeledMatrix> parse_labeled_matrices(std::istream& in);
void write_labeled_matrix(std::ostream& out, const std::string& name, const Matrix& m);

AuxiliaryIntegrals parse_auxiliary(std::istream& in);
AuxiliaryIntegrals parse_auxiliary_file(const std::string& path);
void write_auxiliary(std::ostream& out, const AuxiliaryIntegrals& aux);

// ---------------------------------------------------- integral classes

/// Sums of |g_pqrs| over the seven index patterns, each including all of
/// its symmetry images, so that total() equals the full-tensor sum.
struct IntegralClassSums {
  static constexpr std::array<const char*, 7> names = {"pppp", "pqqq", "pqpq", "ppqq",
                                                       "pqrq", "pprs", "pqrs"};
  std::array<double, 7> sums{};

  double operator[](std::size_t i) const { return sums[i]; }
  double at(const std::string& name) const;
  double total() const;
  std::map<std::string, double> as_map() const;
};

IntegralClassSums class_decomposition(const MolecularHamiltonian& h);

}  // namespace onenorm
