#include "onenorm/analysis.hpp"

#include "onenorm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>

namespace onenorm {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

}  // namespace

ScalingFit fit_scaling(const std::vector<ScalingPoint>& points) {
  if (points.size() < 3) {
    throw InputError("scaling fit needs at least 3 points (got " + std::to_string(points.size()) + ")");
  }
  for (const auto& p : points) {
    if (!(p.n > 0.0) || !(p.lambda > 0.0) || !std::isfinite(p.n) || !std::isfinite(p.lambda)) {
      throw InputError("scaling fit requires strictly positive finite N and lambda");
    }
  }
  const double m = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += std::log(p.n);
    my += std::log(p.lambda);
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.n) - mx, dy = std::log(p.lambda) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InputError("scaling fit needs at least two distinct N");

  ScalingFit fit;
  fit.points = points;
  fit.alpha = sxy / sxx;
  fit.beta = my - fit.alpha * mx;
  if (syy == 0.0) {
    fit.degenerate = true;
    fit.r_squared = 1.0;
    return fit;
  }
  double ss_res = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.lambda) - (fit.alpha * std::log(p.n) + fit.beta);
    ss_res += r * r;
  }
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

nlohmann::ordered_json to_json(const ScalingFit& fit) {
  nlohmann::ordered_json j;
  j["alpha"] = fit.alpha;
  j["beta"] = fit.beta;
  j["r_squared"] = fit.r_squared;
  j["degenerate"] = fit.degenerate;
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : fit.points) pts.push_back({p.n, p.lambda});
  j["points"] = pts;
  return j;
}

std::vector<ScalingPoint> parse_scaling_csv(std::istream& in) {
  std::vector<ScalingPoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InputError("scaling CSV line " + std::to_string(line_no) + " needs two columns");
    }
    ScalingPoint p;
    if (!parse_number(line.substr(0, comma), p.n) || !parse_number(line.substr(comma + 1), p.lambda)) {
      if (points.empty() && line_no == 1) continue;  // header row
      throw InputError("scaling CSV line " + std::to_string(line_no) + " is not numeric");
    }
    points.push_back(p);
  }
  return points;
}

std::vector<ReportRow> aggregate_report(const std::vector<LabeledReport>& reports,
                                        const std::string& baseline) {
  if (reports.empty()) throw InputError("report needs at least one entry");
  std::set<std::string> seen;
  const NormReport* base = nullptr;
  for (const auto& r : reports) {
    if (!seen.insert(r.label).second) throw InputError("duplicate report label '" + r.label + "'");
    if (r.label == baseline) base = &r.report;
  }
  if (!base) throw InputError("baseline label '" + baseline + "' not among the reports");
  const double ref = base->lambda_Q_no_const;
  if (!(ref > 0.0)) throw NumericalError("baseline lambda_Q must be positive");

  std::vector<ReportRow> rows;
  rows.reserve(reports.size());
  for (const auto& [label, r] : reports) {
    rows.push_back({label, r.lambda_C, r.lambda_T, r.lambda_V_prime, r.lambda_Q_no_const,
                    100.0 * (1.0 - r.lambda_Q_no_const / ref)});
  }
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << kReportCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.label << ',' << format_double(r.lambda_C) << ',' << format_double(r.lambda_T) << ','
        << format_double(r.lambda_V_prime) << ',' << format_double(r.lambda_Q) << ','
        << format_double(r.reduction_pct) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json report_json(const std::vector<ReportRow>& rows, const std::string& baseline) {
  nlohmann::ordered_json j;
  j["baseline"] = baseline;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json e;
    e["label"] = r.label;
    e["lambda_C"] = r.lambda_C;
    e["lambda_T"] = r.lambda_T;
    e["lambda_V_prime"] = r.lambda_V_prime;
    e["lambda_Q"] = r.lambda_Q;
    e["reduction_pct"] = r.reduction_pct;
    arr.push_back(std::move(e));
  }
  j["rows"] = arr;
  return j;
}

}  // namespace onenorm
