#pragma once

#include "onenorm/norms.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace onenorm {

struct ScalingPoint {
  double n = 0.0;
  double lambda = 0.0;
};

/// log(lambda) = alpha * log(N) + beta, natural logarithms.
struct ScalingFit {
  double alpha = 0.0;
  double beta = 0.0;
  double r_squared = 0.0;
  std::vector<ScalingPoint> points;
  /// Set when the lambda series has zero variance; r_squared is then 1.
  bool degenerate = false;
};

/// Ordinary least squares on (log N, log lambda). Needs at least three
/// strictly positive points with at least two distinct N.
ScalingFit fit_scaling(const std::vector<ScalingPoint>& points);

nlohmann::ordered_json to_json(const ScalingFit& fit);

/// Reads "N,lambda" rows; a leading non-numeric header row is skipped.
std::vector<ScalingPoint> parse_scaling_csv(std::istream& in);

struct LabeledReport {
  std::string label;
  NormReport report;
};

struct ReportRow {
  std::string label;
  double lambda_C = 0.0;
  double lambda_T = 0.0;
  double lambda_V_prime = 0.0;
  double lambda_Q = 0.0;  // without the constant
  double reduction_pct = 0.0;
};

/// One row per label in input order; reduction_pct = 100 (1 - lambda_Q / lambda_Q(baseline)).
std::vector<ReportRow> aggregate_report(const std::vector<LabeledReport>& reports,
                                        const std::string& baseline);

inline constexpr const char* kReportCsvHeader = "label,lambda_C,lambda_T,lambda_V_prime,lambda_Q,reduction_pct";

std::string report_csv(const std::vector<ReportRow>& rows);
nlohmann::ordered_json report_json(const std::vector<ReportRow>& rows, const std::string& baseline);

}  // namespace onenorm
