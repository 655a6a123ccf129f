#include "onenorm/error.hpp"
#include "onenorm/integrals.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace onenorm {

namespace {

constexpr const char* kSectionTag = "#SECTION";

std::string format_value(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<int> as_index_list(const LabeledMatrix& s) {
  const Matrix& m = s.values;
  if (m.rows() != 1 && m.cols() != 1 && m.size() != 0) {
    throw InputError(s.name + " must be a single row or column");
  }
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    if (v != std::floor(v)) throw InputError(s.name + " must contain integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Matrix index_row(const std::vector<int>& v) {
  Matrix m(1, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

}  // namespace

std::vector<LabeledMatrix> parse_labeled_matrices(std::istream& in) {
  std::vector<LabeledMatrix> sections;
  std::vector<double> pending;
  Eigen::Index rows = 0, cols = 0;
  bool open = false;

  auto close = [&] {
    if (!open) return;
    if (static_cast<Eigen::Index>(pending.size()) != rows * cols) {
      throw InputError("section " + sections.back().name + " declares " + std::to_string(rows) +
                       "x" + std::to_string(cols) + " values but has " +
                       std::to_string(pending.size()));
    }
    Matrix& m = sections.back().values;
    m.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = pending[static_cast<std::size_t>(r * cols + c)];
    pending.clear();
    open = false;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == kSectionTag) {
      close();
      LabeledMatrix s;
      long r = -1, c = -1;
      if (!(ls >> s.name >> r >> c) || r < 0 || c < 0) {
        throw InputError("line " + std::to_string(line_no) +
                         ": expected '#SECTION <name> <rows> <cols>'");
      }
      rows = r;
      cols = c;
      sections.push_back(std::move(s));
      open = true;
      continue;
    }
    if (first[0] == '#') continue;  // comment
    if (!open) throw InputError("line " + std::to_string(line_no) + ": value outside a section");
    for (std::string tok = first;;) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') {
        throw InputError("line " + std::to_string(line_no) + ": non-numeric value '" + tok + "'");
      }
      pending.push_back(v);
      if (!(ls >> tok)) break;
    }
  }
  close();
  return sections;
}

void write_labeled_matrix(std::ostream& out, const std::string& name, const Matrix& m) {
  out << kSectionTag << ' ' << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_value(m(r, c));
    }
    out << '\n';
  }
}

AuxiliaryIntegrals parse_auxiliary(std::istream& in) {
  AuxiliaryIntegrals aux;
  std::set<std::string> seen;
  std::array<std::optional<Matrix>, 3> dipole;
  for (auto& s : parse_labeled_matrices(in)) {
    if (!seen.insert(s.name).second) throw InputError("section " + s.name + " appears twice");
    if (s.name == "OVERLAP") aux.ao_overlap = std::move(s.values);
    else if (s.name == "MO_COEFF") aux.mo_coefficients = std::move(s.values);
    else if (s.name == "DIPOLE_X") dipole[0] = std::move(s.values);
    else if (s.name == "DIPOLE_Y") dipole[1] = std::move(s.values);
    else if (s.name == "DIPOLE_Z") dipole[2] = std::move(s.values);
    else if (s.name == "AO_ATOM_MAP") aux.ao_to_atom = as_index_list(s);
    else if (s.name == "ATOMIC_NUMBERS") aux.atomic_numbers = as_index_list(s);
    else throw InputError("unknown section name '" + s.name + "'");
  }
  const int n_dipole = dipole[0].has_value() + dipole[1].has_value() + dipole[2].has_value();
  if (n_dipole == 3) {
    aux.dipole_ao = std::array<Matrix, 3>{*dipole[0], *dipole[1], *dipole[2]};
  } else if (n_dipole != 0) {
    throw InputError("DIPOLE_X, DIPOLE_Y and DIPOLE_Z must be given together");
  }
  aux.validate();
  return aux;
}

AuxiliaryIntegrals parse_auxiliary_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_auxiliary(in);
}

void write_auxiliary(std::ostream& out, const AuxiliaryIntegrals& aux) {
  if (aux.ao_overlap) write_labeled_matrix(out, "OVERLAP", *aux.ao_overlap);
  if (aux.mo_coefficients) write_labeled_matrix(out, "MO_COEFF", *aux.mo_coefficients);
  if (aux.dipole_ao) {
    write_labeled_matrix(out, "DIPOLE_X", (*aux.dipole_ao)[0]);
    write_labeled_matrix(out, "DIPOLE_Y", (*aux.dipole_ao)[1]);
    write_labeled_matrix(out, "DIPOLE_Z", (*aux.dipole_ao)[2]);
  }
  if (aux.ao_to_atom) write_labeled_matrix(out, "AO_ATOM_MAP", index_row(*aux.ao_to_atom));
  if (aux.atomic_numbers) write_labeled_matrix(out, "ATOMIC_NUMBERS", index_row(*aux.atomic_numbers));
}

}  // namespace onenorm
