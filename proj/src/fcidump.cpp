#include "onenorm/error.hpp"
#include "onenorm/integrals.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

namespace onenorm {

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

bool header_terminated(const std::string& line_upper) {
  if (line_upper.find("&END") != std::string::npos) return true;
  // Fortran namelist terminator "/" on its own or at the end of a line.
  auto last = line_upper.find_last_not_of(" \t\r");
  return last != std::string::npos && line_upper[last] == '/';
}

double parse_value(std::string token, std::size_t line_no) {
  std::replace(token.begin(), token.end(), 'D', 'E');
  std::replace(token.begin(), token.end(), 'd', 'e');
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    throw InputError("FCIDUMP line " + std::to_string(line_no) + ": non-numeric value '" +
                     token + "'");
  }
  return v;
}

long parse_index(const std::string& token, std::size_t line_no) {
  long v = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw InputError("FCIDUMP line " + std::to_string(line_no) + ": bad index '" + token + "'");
  }
  return v;
}

std::string format_value(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

MolecularHamiltonian parse_fcidump(std::istream& in, std::vector<std::string>* warnings) {
  std::string line;
  std::size_t line_no = 0;

  // Namelist header.
  std::string header;
  bool started = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string u = upper(line);
    if (!started) {
      const auto first = u.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (u.compare(first, 4, "&FCI") != 0) {
        throw InputError("malformed FCIDUMP namelist: expected '&FCI' header");
      }
      started = true;
      header += u.substr(first + 4) + " ";
    } else {
      header += u + " ";
    }
    if (header_terminated(u)) break;
  }
  if (!started || !header_terminated(upper(line))) {
    throw InputError("malformed FCIDUMP namelist: missing '&END' terminator");
  }

  auto read_key = [&](const char* key) -> std::optional<long> {
    const std::regex re(std::string("(^|[^A-Z0-9_])") + key + "\\s*=\\s*([-+]?[0-9]+)");
    std::smatch m;
    if (!std::regex_search(header, m, re)) return std::nullopt;
    return std::stol(m[2].str());
  };
  const auto norb = read_key("NORB");
  const auto nelec = read_key("NELEC");
  if (!norb || *norb < 0) throw InputError("malformed FCIDUMP namelist: NORB missing");
  if (!nelec) throw InputError("malformed FCIDUMP namelist: NELEC missing");
  // ORBSYM, ISYM, MS2, UHF are accepted and ignored.

  const auto n = static_cast<std::size_t>(*norb);
  Matrix h1 = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  TwoBodyTensor g(n);
  std::vector<char> g_seen(g.packed().size(), 0);
  std::vector<char> h_seen(n * (n + 1) / 2, 0);
  double core = 0.0;
  bool core_seen = false;

  auto conflict = [&](bool seen, double old_value, double new_value, const std::string& what) {
    if (seen && warnings && std::abs(old_value - new_value) > 1e-10) {
      warnings->push_back("FCIDUMP line " + std::to_string(line_no) + ": duplicate " + what +
                          " overrides " + format_value(old_value) + " with " +
                          format_value(new_value));
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 5) {
      throw InputError("FCIDUMP line " + std::to_string(line_no) + ": expected 'value i j k l'");
    }
    const double v = parse_value(tok[0], line_no);
    long idx[4];
    for (int k = 0; k < 4; ++k) {
      idx[k] = parse_index(tok[static_cast<std::size_t>(k) + 1], line_no);
      if (idx[k] < 0 || idx[k] > *norb) {
        throw InputError("FCIDUMP line " + std::to_string(line_no) + ": index " +
                         std::to_string(idx[k]) + " out of range [0, " + std::to_string(*norb) +
                         "]");
      }
    }
    const auto [i, j, k, l] = std::array<long, 4>{idx[0], idx[1], idx[2], idx[3]};
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      conflict(core_seen, core, v, "core constant");
      core = v;
      core_seen = true;
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      const auto p = static_cast<std::size_t>(i - 1), q = static_cast<std::size_t>(j - 1);
      auto& seen = h_seen[pair_index(p, q)];
      conflict(seen, h1(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)), v,
               "one-body entry");
      seen = 1;
      h1(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = v;
      h1(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) = v;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      const auto p = static_cast<std::size_t>(i - 1), q = static_cast<std::size_t>(j - 1);
      const auto r = static_cast<std::size_t>(k - 1), s = static_cast<std::size_t>(l - 1);
      auto& seen = g_seen[pair_index(pair_index(p, q), pair_index(r, s))];
      conflict(seen, g(p, q, r, s), v, "two-body entry");
      seen = 1;
      g.set(p, q, r, s, v);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // Orbital energy line written by some producers; not part of H.
      if (warnings) {
        warnings->push_back("FCIDUMP line " + std::to_string(line_no) +
                            ": orbital energy line ignored");
      }
    } else {
      throw InputError("FCIDUMP line " + std::to_string(line_no) + ": invalid index pattern");
    }
  }
  return MolecularHamiltonian(core, std::move(h1), std::move(g), static_cast<int>(*nelec));
}

MolecularHamiltonian parse_fcidump_file(const std::string& path,
                                        std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_fcidump(in, warnings);
}

void write_fcidump(std::ostream& out, const MolecularHamiltonian& h) {
  const std::size_t n = h.n_orbitals();
  out << "&FCI NORB=" << n << ",NELEC=" << h.n_electrons().value_or(0) << ",MS2=0,\n";
  out << " ORBSYM=";
  for (std::size_t i = 0; i < n; ++i) out << "1,";
  out << "\n ISYM=1,\n&END\n";
  constexpr double cutoff = 1e-12;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (pair_index(r, s) > pair_index(p, q)) continue;
          const double v = h.g(p, q, r, s);
          if (std::abs(v) <= cutoff) continue;
          out << format_value(v) << ' ' << p + 1 << ' ' << q + 1 << ' ' << r + 1 << ' ' << s + 1
              << '\n';
        }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      const double v = h.h(p, q);
      if (std::abs(v) <= cutoff) continue;
      out << format_value(v) << ' ' << p + 1 << ' ' << q + 1 << " 0 0\n";
    }
  out << format_value(h.core_constant()) << " 0 0 0 0\n";
}

void write_fcidump_file(const std::string& path, const MolecularHamiltonian& h) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_fcidump(out, h);
}

}  // namespace onenorm
