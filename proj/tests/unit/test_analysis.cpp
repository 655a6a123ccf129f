#include "onenorm/analysis.hpp"
#include "onenorm/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace onenorm;

namespace {

LabeledReport labeled(const std::string& label, double lambda_T, double lambda_V_prime) {
  NormReport r;
  r.lambda_T = lambda_T;
  r.lambda_V_prime = lambda_V_prime;
  r.lambda_Q_no_const = lambda_T + lambda_V_prime;
  return {label, r};
}

}  // namespace

TEST_CASE("exact power law") {
  const auto fit = fit_scaling({{2, 4}, {3, 9}, {4, 16}});
  CHECK(std::abs(fit.alpha - 2.0) <= 1e-12);
  CHECK(std::abs(fit.beta) <= 1e-12);
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(fit.degenerate);
  CHECK(fit.points.size() == 3);
}

TEST_CASE("prefactor lands in beta") {
  std::vector<ScalingPoint> pts;
  for (double n : {2.0, 5.0, 11.0, 20.0}) pts.push_back({n, 3.0 * std::pow(n, 1.5)});
  const auto fit = fit_scaling(pts);
  CHECK(fit.alpha == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.beta == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("noisy data has R^2 below one") {
  const auto fit = fit_scaling({{2, 4.4}, {3, 8.1}, {4, 17.0}, {5, 24.0}});
  CHECK(fit.r_squared < 1.0);
  CHECK(fit.r_squared > 0.9);
}

TEST_CASE("constant series is degenerate") {
  const auto fit = fit_scaling({{2, 5}, {3, 5}, {4, 5}});
  CHECK(fit.degenerate);
  CHECK(fit.alpha == doctest::Approx(0.0));
  CHECK(fit.r_squared == 1.0);
}

TEST_CASE("fit input errors") {
  CHECK_THROWS_AS(fit_scaling({{2, 4}, {3, 9}}), InputError);
  CHECK_THROWS_AS(fit_scaling({{2, 4}, {3, -9}, {4, 16}}), InputError);
  CHECK_THROWS_AS(fit_scaling({{0, 4}, {3, 9}, {4, 16}}), InputError);
  CHECK_THROWS_AS(fit_scaling({{3, 4}, {3, 9}, {3, 16}}), InputError);
}

TEST_CASE("fit JSON") {
  const auto j = to_json(fit_scaling({{2, 4}, {3, 9}, {4, 16}}));
  for (const char* key : {"alpha", "beta", "r_squared", "points", "degenerate"}) CHECK(j.contains(key));
  CHECK(j["points"].size() == 3);
}

TEST_CASE("scaling CSV") {
  std::istringstream with_header("N,lambda\n2,4\n3,9\n\n4,16\n");
  const auto pts = parse_scaling_csv(with_header);
  REQUIRE(pts.size() == 3);
  CHECK(pts[2].n == 4.0);
  CHECK(pts[2].lambda == 16.0);
  std::istringstream bare("2,4\n3,9\n");
  CHECK(parse_scaling_csv(bare).size() == 2);
  std::istringstream bad("2,4\nthree,9\n");
  CHECK_THROWS_AS(parse_scaling_csv(bad), InputError);
}

TEST_CASE("reductions against a baseline") {
  const auto rows = aggregate_report({labeled("cmo", 60.0, 41.0), labeled("opt", 50.0, 40.0)}, "cmo");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == "cmo");
  CHECK(rows[0].reduction_pct == 0.0);
  CHECK(rows[1].lambda_Q == 90.0);
  CHECK(rows[1].reduction_pct == doctest::Approx(100.0 * (1.0 - 90.0 / 101.0)));
  CHECK(rows[1].reduction_pct == doctest::Approx(10.89).epsilon(1e-3));
}

TEST_CASE("a worse basis gives a negative reduction") {
  const auto rows = aggregate_report({labeled("a", 1.0, 1.0), labeled("b", 2.0, 2.0)}, "a");
  CHECK(rows[1].reduction_pct == doctest::Approx(-100.0));
}

TEST_CASE("report errors") {
  CHECK_THROWS_AS(aggregate_report({labeled("a", 1, 1), labeled("a", 2, 2)}, "a"), InputError);
  CHECK_THROWS_AS(aggregate_report({labeled("a", 1, 1)}, "b"), InputError);
  CHECK_THROWS_AS(aggregate_report({labeled("a", 0, 0)}, "a"), NumericalError);
}

TEST_CASE("report serialization") {
  const auto rows = aggregate_report({labeled("cmo", 60.0, 41.0), labeled("er", 55.0, 40.0)}, "cmo");
  const auto csv = report_csv(rows);
  CHECK(csv.rfind(std::string(kReportCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const auto j = report_json(rows, "cmo");
  CHECK(j["baseline"] == "cmo");
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][1]["label"] == "er");
}
