#include "onenorm/analysis.hpp"
#include "onenorm/error.hpp"
#include "onenorm/integrals.hpp"
#include "onenorm/localize.hpp"
#include "onenorm/norms.hpp"
#include "onenorm/optimize.hpp"
#include "onenorm/parallel.hpp"
#include "onenorm/qubit_oracle.hpp"
#include "onenorm/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using namespace onenorm;
using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kInputError = 1, kNumericalError = 2 };

struct Options {
  std::string input;
  std::string output;  // FCIDUMP destination for commands producing a Hamiltonian
  bool csv = false;
  bool pretty = false;
  bool strict = false;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;

  std::string matrix_path;
  std::vector<std::size_t> pair;
  int steps = 64;
  std::vector<std::size_t> frozen;
  std::vector<std::size_t> active;
  std::string scheme = "er";
  std::string aux_path;
  std::vector<std::size_t> window;
  std::string start = "er";
  int max_iter = 500;
  double fd_step = 1e-5;
  std::string algorithm = "quasi-newton-bounded";
  bool cholesky = false;
  std::string scaling_csv;
  std::string baseline;
  std::vector<std::string> report_files;
};

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void emit(const json& j, const Options& opt) { std::cout << j.dump(opt.pretty ? 2 : -1) << '\n'; }

MolecularHamiltonian load(const std::string& path, bool strict) {
  std::vector<std::string> warnings;
  auto h = parse_fcidump_file(path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  if (strict && !warnings.empty()) throw InputError("FCIDUMP warnings are fatal with --strict");
  return h;
}

AuxiliaryIntegrals load_aux(const std::string& path) {
  return path.empty() ? AuxiliaryIntegrals{} : parse_auxiliary_file(path);
}

void maybe_write(const Options& opt, const MolecularHamiltonian& h) {
  if (!opt.output.empty()) write_fcidump_file(opt.output, h);
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_norm(const Options& opt) {
  const auto h = load(opt.input, opt.strict);
  const auto report = norm_report(h, opt.cholesky);
  if (opt.csv) {
    std::cout << "field,value\n";
    const json j = to_json(report);
    for (const auto& [k, v] : j.items())
      if (v.is_number()) std::cout << k << ',' << fmt_double(v.get<double>()) << '\n';
    return kOk;
  }
  if (opt.pretty) {
    std::cout << "orbitals        " << report.n_orbitals << '\n'
              << "lambda_C        " << fmt_double(report.lambda_C) << '\n'
              << "lambda_T        " << fmt_double(report.lambda_T) << '\n'
              << "lambda_V'       " << fmt_double(report.lambda_V_prime) << '\n'
              << "lambda_Q        " << fmt_double(report.lambda_Q_no_const) << '\n'
              << "lambda_Q + C    " << fmt_double(report.lambda_Q_full) << '\n'
              << "lambda (Lee)    " << fmt_double(report.lambda_lee) << '\n';
    if (report.lambda_SF) std::cout << "lambda_SF       " << fmt_double(*report.lambda_SF) << '\n';
    return kOk;
  }
  emit(to_json(report), opt);
  return kOk;
}

int cmd_classes(const Options& opt) {
  const auto sums = class_decomposition(load(opt.input, opt.strict));
  if (opt.csv) {
    std::cout << "class,sum_abs\n";
    for (std::size_t i = 0; i < IntegralClassSums::names.size(); ++i)
      std::cout << IntegralClassSums::names[i] << ',' << fmt_double(sums[i]) << '\n';
    return kOk;
  }
  emit(to_json(sums), opt);
  return kOk;
}

int cmd_rotate(const Options& opt) {
  const auto h = load(opt.input, opt.strict);
  std::ifstream in(opt.matrix_path);
  if (!in) throw InputError("cannot open '" + opt.matrix_path + "'");
  const auto sections = parse_labeled_matrices(in);
  if (sections.size() != 1) throw InputError("rotation file must hold exactly one matrix section");
  const Matrix& u = sections.front().values;
  if (static_cast<std::size_t>(u.rows()) != h.n_orbitals() || u.rows() != u.cols()) {
    throw InputError("rotation matrix must be " + std::to_string(h.n_orbitals()) + " x " +
                     std::to_string(h.n_orbitals()));
  }
  const auto rotated = rotate_hamiltonian(h, OrbitalRotation(u));
  maybe_write(opt, rotated);
  emit(to_json(norm_report(rotated)), opt);
  return kOk;
}

int cmd_jacobi_scan(const Options& opt) {
  const auto h = load(opt.input, opt.strict);
  const std::size_t n = h.n_orbitals();
  if (opt.pair.size() != 2 || opt.pair[0] == opt.pair[1] || opt.pair[0] >= n || opt.pair[1] >= n) {
    throw InputError("--pair needs two distinct orbital indices below " + std::to_string(n));
  }
  if (opt.steps < 1) throw InputError("--steps must be positive");
  std::vector<double> thetas(static_cast<std::size_t>(opt.steps) + 1);
  for (std::size_t k = 0; k < thetas.size(); ++k)
    thetas[k] = -std::numbers::pi / 2 + std::numbers::pi * static_cast<double>(k) / opt.steps;
  const auto values = jacobi_rotation_norm_scan(h, opt.pair[0], opt.pair[1], thetas);
  if (opt.csv) {
    std::cout << "theta,lambda_Q\n";
    for (std::size_t k = 0; k < thetas.size(); ++k)
      std::cout << fmt_double(thetas[k]) << ',' << fmt_double(values[k]) << '\n';
    return kOk;
  }
  json j;
  j["p"] = opt.pair[0];
  j["q"] = opt.pair[1];
  j["theta"] = thetas;
  j["lambda_Q"] = values;
  emit(j, opt);
  return kOk;
}

int cmd_freeze(const Options& opt) {
  const auto h = load(opt.input, opt.strict);
  ActiveSpaceSpec spec;
  spec.frozen = opt.frozen;
  spec.active = opt.active;
  std::vector<char> used(h.n_orbitals(), 0);
  for (auto i : opt.frozen)
    if (i < used.size()) used[i] = 1;
  for (auto i : opt.active)
    if (i < used.size()) used[i] = 1;
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) spec.virtual_orbitals.push_back(i);
  if (h.n_electrons()) spec.n_active_electrons = *h.n_electrons() - 2 * static_cast<int>(opt.frozen.size());
  spec.validate(h.n_orbitals());
  const auto result = freeze_core(h, spec);
  maybe_write(opt, result.hamiltonian);
  json j;
  j["shift"] = result.shift;
  j["core_constant"] = result.hamiltonian.core_constant();
  j["n_active_electrons"] = spec.n_active_electrons;
  j["report"] = to_json(norm_report(result.hamiltonian));
  emit(j, opt);
  return kOk;
}

int cmd_localize(const Options& opt) {
  const auto h = load(opt.input, opt.strict);
  const auto aux = load_aux(opt.aux_path);
  LocalizationRequest req;
  req.scheme = parse_scheme(opt.scheme);
  req.window = opt.window;
  req.seed = opt.seed;
  const auto result = localize(h, std::nullopt, aux, req);
  if (opt.strict && !result.converged) throw NumericalError("localization did not converge");
  maybe_write(opt, result.hamiltonian);
  json j;
  j["scheme"] = to_string(req.scheme);
  j["sweeps"] = result.sweeps;
  j["converged"] = result.converged;
  j["objective_history"] = result.objective_history;
  j["lambda_Q_before"] = lambda_Q(h);
  j["lambda_Q_after"] = lambda_Q(result.hamiltonian);
  j["rotation"] = matrix_json(result.rotation.matrix());
  emit(j, opt);
  return kOk;
}

int cmd_optimize(const Options& opt) {
  const auto h = load(opt.input, opt.strict);
  const auto aux = load_aux(opt.aux_path);
  OptimizerConfig cfg;
  cfg.window = opt.window;
  cfg.max_iterations = opt.max_iter;
  cfg.fd_step = opt.fd_step;
  cfg.algorithm = parse_algorithm(opt.algorithm);
  if (opt.start == "none" || opt.start == "cmo") {
    cfg.start_from.reset();
  } else {
    cfg.start_from = parse_scheme(opt.start);
  }
  cfg.localization.seed = opt.seed;
  const auto result = minimize_norm(h, cfg, aux);
  if (opt.strict && !result.converged) throw NumericalError("optimizer did not converge");
  maybe_write(opt, result.hamiltonian);
  if (opt.csv) {
    std::cout << "iteration,lambda_Q,grad_inf,evaluations\n";
    for (const auto& r : result.trace)
      std::cout << r.iteration << ',' << fmt_double(r.lambda_Q) << ',' << fmt_double(r.grad_inf) << ','
                << r.evaluations << '\n';
    return kOk;
  }
  json j;
  j["algorithm"] = to_string(cfg.algorithm);
  j["start"] = cfg.start_from ? to_string(*cfg.start_from) : "none";
  j["initial_lambda"] = result.initial_lambda;
  j["start_lambda"] = result.start_lambda;
  j["final_lambda"] = result.final_lambda;
  j["reduction_pct"] = 100.0 * (1.0 - result.final_lambda / result.initial_lambda);
  j["iterations"] = result.trace.empty() ? 0 : result.trace.back().iteration;
  j["converged"] = result.converged;
  json trace = json::array();
  for (const auto& r : result.trace)
    trace.push_back({{"iteration", r.iteration}, {"lambda_Q", r.lambda_Q}, {"grad_inf", r.grad_inf},
                     {"evaluations", r.evaluations}});
  j["trace"] = trace;
  emit(j, opt);
  return kOk;
}

int cmd_oracle_check(const Options& opt) {
  const auto h = load(opt.input, opt.strict);
  const double formula = lambda_Q(h);
  const auto terms = jordan_wigner_expand(h);
  const double oracle = lambda_Q_oracle(terms, false);
  const double diff = std::abs(formula - oracle);
  json j;
  j["lambda_Q_formula"] = formula;
  j["lambda_Q_oracle"] = oracle;
  j["difference"] = diff;
  j["sparsity"] = sparsity_count(terms);
  j["identity_coefficient"] = terms.identity_coefficient();
  emit(j, opt);
  if (opt.strict && diff > 1e-9) return kNumericalError;
  return kOk;
}

int cmd_scaling_fit(const Options& opt) {
  std::ifstream in(opt.scaling_csv);
  if (!in) throw InputError("cannot open '" + opt.scaling_csv + "'");
  const auto fit = fit_scaling(parse_scaling_csv(in));
  emit(to_json(fit), opt);
  return kOk;
}

// Report inputs are FCIDUMP files or NormReport JSON files; the label is the
// file stem unless given as label=path.
int cmd_report(const Options& opt) {
  std::vector<LabeledReport> reports;
  for (const auto& spec : opt.report_files) {
    std::string label, path = spec;
    if (const auto eq = spec.find('='); eq != std::string::npos) {
      label = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    } else {
      const auto slash = path.find_last_of('/');
      label = path.substr(slash == std::string::npos ? 0 : slash + 1);
      if (const auto dot = label.rfind('.'); dot != std::string::npos && dot > 0) label.resize(dot);
    }
    NormReport r;
    if (path.size() > 5 && path.ends_with(".json")) {
      std::ifstream in(path);
      if (!in) throw InputError("cannot open '" + path + "'");
      const auto j = nlohmann::json::parse(in, nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw InputError("'" + path + "' is not a JSON object");
      try {
        r.n_orbitals = j.value("n_orbitals", std::size_t{0});
        r.lambda_C = j.at("lambda_C").get<double>();
        r.lambda_T = j.at("lambda_T").get<double>();
        r.lambda_V_prime = j.at("lambda_V_prime").get<double>();
        r.lambda_Q_no_const = j.at("lambda_Q_no_const").get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "' lacks NormReport fields: " + e.what());
      }
    } else {
      r = norm_report(load(path, opt.strict));
    }
    reports.push_back({label, r});
  }
  const auto rows = aggregate_report(reports, opt.baseline);
  if (opt.csv) {
    std::cout << report_csv(rows);
    return kOk;
  }
  emit(report_json(rows, opt.baseline), opt);
  return kOk;
}

unsigned threads_from_env() {
  const char* env = std::getenv("ONENORM_THREADS");
  if (!env || !*env) return 0;
  unsigned v = 0;
  const auto res = std::from_chars(env, env + std::strlen(env), v);
  if (res.ec != std::errc{} || *res.ptr != '\0') throw InputError("ONENORM_THREADS must be a non-negative integer");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-norm analysis and orbital optimization of electronic Hamiltonians"};
  app.require_subcommand(1);
  Options opt;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  app.add_option("--threads", threads, "Worker threads (default: ONENORM_THREADS or all cores)");
  app.add_option("--seed", seed, "Seed for randomized pair ordering");
  app.add_flag("--strict", opt.strict, "Treat warnings and non-convergence as failures");

  auto with_input = [&](CLI::App* sub) {
    sub->add_option("fcidump", opt.input, "FCIDUMP file")->required();
    return sub;
  };
  auto with_format = [&](CLI::App* sub, bool tabular) {
    sub->add_flag("--pretty", opt.pretty, "Indented output");
    if (tabular) sub->add_flag("--csv", opt.csv, "CSV output");
    return sub;
  };
  auto with_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", opt.output, "Write the resulting Hamiltonian as FCIDUMP");
    return sub;
  };

  auto* norm = with_format(with_input(app.add_subcommand("norm", "1-norm report")), true);
  norm->add_flag("--cholesky", opt.cholesky, "Include the single-factorization norm");
  with_format(with_input(app.add_subcommand("classes", "Seven-class two-body decomposition")), true);

  auto* rotate = with_output(with_format(with_input(app.add_subcommand("rotate", "Apply an orbital rotation")), false));
  rotate->add_option("--matrix", opt.matrix_path, "Labeled-matrix file holding U")->required();

  auto* scan = with_format(with_input(app.add_subcommand("jacobi-scan", "lambda_Q along a Givens rotation")), true);
  scan->add_option("--pair", opt.pair, "Orbital pair p q")->expected(2)->required();
  scan->add_option("--steps", opt.steps, "Intervals over [-pi/2, pi/2]");

  auto* freeze = with_output(with_format(with_input(app.add_subcommand("freeze", "Frozen-core reduction")), false));
  freeze->add_option("--frozen", opt.frozen, "Frozen orbital indices");
  freeze->add_option("--active", opt.active, "Active orbital indices")->required();

  auto* loc = with_output(with_format(with_input(app.add_subcommand("localize", "Orbital localization")), false));
  loc->add_option("--scheme", opt.scheme, "oao, pm, fb or er");
  loc->add_option("--aux", opt.aux_path, "Auxiliary AO integrals");
  loc->add_option("--window", opt.window, "Orbitals allowed to mix");

  auto* optim = with_output(with_format(with_input(app.add_subcommand("optimize", "Minimize lambda_Q over rotations")), true));
  optim->add_option("--start", opt.start, "Initial localization: oao, pm, fb, er or none");
  optim->add_option("--aux", opt.aux_path, "Auxiliary AO integrals");
  optim->add_option("--window", opt.window, "Orbitals allowed to mix");
  optim->add_option("--max-iter", opt.max_iter, "Iteration limit");
  optim->add_option("--fd-step", opt.fd_step, "Finite-difference step");
  optim->add_option("--algorithm", opt.algorithm, "quasi-newton-bounded or sequential-quadratic");

  with_format(with_input(app.add_subcommand("oracle-check", "Compare lambda_Q with the Pauli expansion")), false);

  auto* fit = with_format(app.add_subcommand("scaling-fit", "Fit log lambda = alpha log N + beta"), false);
  fit->add_option("--csv", opt.scaling_csv, "CSV of N,lambda rows")->required();

  auto* report = with_format(app.add_subcommand("report", "Tabulate norms against a baseline"), true);
  report->add_option("--baseline", opt.baseline, "Baseline label")->required();
  report->add_option("files", opt.report_files, "FCIDUMP or NormReport JSON files, optionally label=path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    set_thread_count(threads ? *threads : threads_from_env());
    opt.seed = seed;
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "norm") return cmd_norm(opt);
    if (name == "classes") return cmd_classes(opt);
    if (name == "rotate") return cmd_rotate(opt);
    if (name == "jacobi-scan") return cmd_jacobi_scan(opt);
    if (name == "freeze") return cmd_freeze(opt);
    if (name == "localize") return cmd_localize(opt);
    if (name == "optimize") return cmd_optimize(opt);
    if (name == "oracle-check") return cmd_oracle_check(opt);
    if (name == "scaling-fit") return cmd_scaling_fit(opt);
    if (name == "report") return cmd_report(opt);
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
