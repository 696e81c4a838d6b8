// variomat: command-line front door over the variogram-matrix library.
// Matrix files are plain CSV (comma-separated numeric rows, no header);
// model files are JSON {mu, sigma2, gamma, metadata}; "-" means
// stdin/stdout. Exit codes: 0 success, 1 domain/validation failure, 2 I/O
// or parse failure.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "variomat/elliptope.hpp"
#include "variomat/inverse.hpp"
#include "variomat/kriging.hpp"
#include "variomat/model.hpp"
#include "variomat/projection.hpp"
#include "variomat_io/io.hpp"

namespace vio = variomat::io;
using nlohmann::json;

namespace {

const char* error_type(const variomat::Error& e) {
  if (dynamic_cast<const variomat::SigmaTooSmall*>(&e)) {
    return "sigma_too_small";
  }
  if (dynamic_cast<const variomat::Unbounded*>(&e)) return "unbounded";
  if (dynamic_cast<const variomat::NotConditionallyNegDef*>(&e)) {
    return "not_conditionally_negative_definite";
  }
  if (dynamic_cast<const variomat::InvalidVariogram*>(&e)) {
    return "invalid_variogram";
  }
  if (dynamic_cast<const variomat::NotInvertible*>(&e)) {
    return "not_invertible";
  }
  if (dynamic_cast<const variomat::SingularInput*>(&e)) {
    return "singular_input";
  }
  if (dynamic_cast<const variomat::SingularModel*>(&e)) {
    return "singular_model";
  }
  if (dynamic_cast<const variomat::InvalidInput*>(&e)) return "invalid_input";
  return "domain_error";
}

void emit(const json& result, const json& warnings = json::array()) {
  json out;
  out["result"] = result;
  out["warnings"] = warnings;
  std::cout << out.dump(2) << "\n";
}

void emit_error(std::ostream& os, const std::string& type,
                const std::string& message) {
  json out;
  out["error"] = {{"type", type}, {"message", message}};
  os << out.dump(2) << "\n";
}

std::uint64_t random_seed() {
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) ^ std::uint64_t(rd());
}

json report_to_json(const variomat::ValidityReport& r) {
  json j;
  j["symmetric_zero_diagonal"] = r.symmetric_zero_diagonal;
  j["conditionally_negative_definite"] = r.conditionally_negative_definite;
  j["entries_nonnegative"] = r.entries_nonnegative;
  j["sigma2_admissible"] =
      r.sigma2_admissible.has_value() ? json(*r.sigma2_admissible) : json();
  j["max_asymmetry"] = r.max_asymmetry;
  j["max_abs_diagonal"] = r.max_abs_diagonal;
  j["max_centered_eigenvalue"] = r.max_centered_eigenvalue;
  j["min_entry"] = r.min_entry;
  j["min_sigma2"] = r.min_sigma2.has_value() ? json(*r.min_sigma2) : json();
  j["unbounded"] = r.unbounded;
  j["degenerate"] = r.degenerate;
  j["valid"] = r.valid();
  return j;
}

variomat::KrigeModel load_model(const std::string& path) {
  const vio::ModelFile f = vio::read_model_path(path);
  return variomat::KrigeModel(
      f.mu, f.sigma2, variomat::VariogramMatrix::from_matrix(f.gamma));
}

Eigen::VectorXd as_vector(const Eigen::MatrixXd& m, const std::string& what) {
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  throw variomat::InvalidInput(what + ": expected a single row or column");
}

void write_matrix_blocks(const std::string& path,
                         const std::vector<variomat::CorrelationMatrix>& ms,
                         std::ostream& fallback) {
  std::ofstream file;
  std::ostream* os = &fallback;
  if (path != "-") {
    file.open(path);
    if (!file) {
      throw vio::IoError("cannot open '" + path + "' for writing");
    }
    os = &file;
  }
  for (const auto& m : ms) {
    vio::write_matrix_csv(*os, m.matrix());
    *os << "\n";
  }
}

// ---- command implementations ----------------------------------------------

int cmd_validate(const std::string& path, std::optional<double> sigma2) {
  const Eigen::MatrixXd g = vio::read_matrix_csv_path(path);
  const variomat::ValidityReport rep = variomat::validate_variogram(g, sigma2);
  emit(report_to_json(rep));
  return rep.valid() ? 0 : 1;
}

int cmd_convert(const std::string& from, const std::string& to,
                const std::string& in_path, std::optional<double> sigma2,
                const std::string& out_path,
                const std::string& sigma2_out_path) {
  const Eigen::MatrixXd in = vio::read_matrix_csv_path(in_path);
  Eigen::MatrixXd out;
  double sigma2_used = 0.0;

  if (from == "cov") {
    const auto sigma = variomat::CovarianceMatrix::from_matrix(in);
    sigma2_used = sigma.sigma2();
    if (to == "cov") {
      out = sigma.matrix();
    } else if (to == "gamma") {
      out = variomat::variogram_of(sigma.matrix()).matrix();
    } else {  // corr
      out = variomat::decompose_covariance(sigma).second.matrix();
    }
  } else {  // gamma
    const auto gamma = variomat::VariogramMatrix::from_matrix(in);
    if (to == "gamma") {
      out = gamma.matrix();
      sigma2_used = sigma2.value_or(0.0);
    } else {
      if (!sigma2.has_value()) {
        throw variomat::InvalidInput(
            "convert: --sigma2 is required when converting gamma -> " + to);
      }
      sigma2_used = *sigma2;
      const auto sigma = variomat::covariance_from_gamma(*sigma2, gamma);
      out = to == "cov" ? sigma.matrix()
                        : variomat::decompose_covariance(sigma).second.matrix();
    }
  }

  vio::write_matrix_csv_path(out_path, out);
  if (!sigma2_out_path.empty()) {
    std::ofstream f(sigma2_out_path);
    if (!f) {
      throw vio::IoError("cannot open '" + sigma2_out_path + "' for writing");
    }
    f << vio::format_number(sigma2_used) << "\n";
  }
  return 0;
}

int cmd_likelihood(const std::string& model_path,
                   const std::string& data_path) {
  const variomat::KrigeModel model = load_model(model_path);
  Eigen::MatrixXd data = vio::read_matrix_csv_path(data_path);
  if (data.cols() != model.dim() && data.cols() == 1 &&
      data.rows() == model.dim()) {
    data = Eigen::MatrixXd(data.transpose());
  }
  if (data.cols() != model.dim()) {
    throw variomat::InvalidInput(
        "likelihood: data has " + std::to_string(data.cols()) +
        " columns, model dimension is " + std::to_string(model.dim()));
  }

  double total = 0.0;
  double quad_total = 0.0;
  double logdet = 0.0;
  json per_draw = json::array();
  for (Eigen::Index k = 0; k < data.rows(); ++k) {
    const variomat::LikelihoodEval ev =
        variomat::loglik(data.row(k).transpose(), model);
    total += ev.loglik;
    quad_total += ev.quad_term;
    logdet = ev.logdet_term;
    per_draw.push_back(ev.loglik);
  }
  json result;
  result["draws"] = data.rows();
  result["dimension"] = model.dim();
  result["loglik"] = total;
  result["logdet_term"] = logdet;
  result["quad_term"] = quad_total;
  result["per_draw"] = per_draw;
  emit(result);
  return 0;
}

int cmd_estimate(const std::string& data_path, const std::string& out_path) {
  const auto samples =
      variomat::SampleSet::from_matrix(vio::read_matrix_csv_path(data_path));
  const variomat::EstimatedModel est = variomat::estimate_model(samples);

  json warnings = json::array();
  vio::ModelFile out;
  out.mu = est.mu_hat;
  out.gamma = est.gamma_hat.matrix();
  out.metadata["estimator"] = "projection";
  const double min_s2 = variomat::min_sigma2(est.gamma_hat);
  if (min_s2 > 0.0) {
    out.sigma2 = min_s2;
    out.metadata["sigma2_rule"] = "min_sigma2(gamma_hat)";
  } else {
    // degenerate data: the common variance is unidentified, pick 1
    out.sigma2 = 1.0;
    out.metadata["sigma2_rule"] = "default_1_degenerate";
    warnings.push_back(
        "gamma_hat is zero; sigma2 is unidentified and defaults to 1");
  }
  // the written file must round-trip into a valid model
  variomat::KrigeModel(out.mu, out.sigma2,
                       variomat::VariogramMatrix::from_matrix(out.gamma));

  if (out_path.empty() || out_path == "-") {
    vio::write_model_path("-", out);
    return 0;
  }
  vio::write_model_path(out_path, out);
  json result;
  result["mu"] = out.mu;
  result["sigma2"] = out.sigma2;
  result["dimension"] = out.gamma.rows();
  result["path"] = out_path;
  emit(result, warnings);
  return 0;
}

int cmd_simulate(const std::string& model_path, Eigen::Index count,
                 std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
  const variomat::KrigeModel model = load_model(model_path);
  const auto field = variomat::simulate_field(
      model.gamma(), count, seed.value_or(random_seed()));
  vio::write_matrix_csv_path(out_path, field.rows());
  return 0;
}

int cmd_sample_prior(const std::string& method, Eigen::Index n,
                     Eigen::Index count, std::optional<std::uint64_t> seed,
                     std::uint64_t max_draws, const std::string& out_path) {
  const std::uint64_t used_seed = seed.value_or(random_seed());
  std::vector<variomat::CorrelationMatrix> draws;
  json result;
  result["method"] = method;
  result["n"] = n;
  result["count_requested"] = count;
  result["seed"] = used_seed;
  json warnings = json::array();

  if (method == "rejection") {
    variomat::RejectionDraws rd =
        variomat::sample_rejection(n, count, used_seed, max_draws);
    draws = std::move(rd.samples);
    result["attempts"] = rd.attempts;
    result["acceptance_rate"] = rd.acceptance_rate;
    result["budget_exhausted"] = rd.budget_exhausted;
    if (rd.budget_exhausted) {
      warnings.push_back("attempt budget exhausted; returning " +
                         std::to_string(draws.size()) + " of " +
                         std::to_string(count) + " requested draws");
    }
  } else if (method == "gram") {
    draws = variomat::sample_gram(n, count, used_seed);
    result["attempts"] = count;
    result["acceptance_rate"] = 1.0;
    result["budget_exhausted"] = false;
  } else {  // cholesky
    draws = variomat::sample_cholesky(n, count, used_seed);
    result["attempts"] = count;
    result["acceptance_rate"] = 1.0;
    result["budget_exhausted"] = false;
  }
  result["count_emitted"] = draws.size();

  if (!out_path.empty()) {
    // matrices as blank-line-separated CSV blocks; "-" sends them to stdout
    // and the stats report to stderr
    write_matrix_blocks(out_path, draws, std::cout);
    if (out_path == "-") {
      json out;
      out["result"] = result;
      out["warnings"] = warnings;
      std::cerr << out.dump(2) << "\n";
      return 0;
    }
    result["path"] = out_path;
  }
  emit(result, warnings);
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& cov_row_path) {
  const variomat::KrigeModel model = load_model(model_path);
  const Eigen::Index n = model.dim();
  const Eigen::VectorXd y =
      as_vector(vio::read_matrix_csv_path(data_path), "predict data");
  const Eigen::VectorXd row =
      as_vector(vio::read_matrix_csv_path(cov_row_path), "predict --cov-row");
  if (y.size() != n) {
    throw variomat::InvalidInput("predict: expected " + std::to_string(n) +
                                 " observations, got " +
                                 std::to_string(y.size()));
  }
  if (row.size() != n + 1) {
    throw variomat::InvalidInput(
        "predict: --cov-row must hold sigma0^2 followed by " +
        std::to_string(n) + " cross-covariances");
  }

  Eigen::MatrixXd full(n + 1, n + 1);
  full(0, 0) = row(0);
  full.block(0, 1, 1, n) = row.tail(n).transpose();
  full.block(1, 0, n, 1) = row.tail(n);
  full.block(1, 1, n, n) = model.covariance();

  const auto sigma_full = variomat::CovarianceMatrix::from_matrix(full);
  const variomat::KrigePrediction p =
      variomat::krige_predict(sigma_full, y, model.mu());

  json warnings = json::array();
  if (p.variance_clamped) {
    warnings.push_back(
        "prediction variance fell below -1e-10 before clamping to 0");
  }
  json result;
  result["prediction"] = p.prediction;
  result["variance"] = p.variance;
  result["variance_clamped"] = p.variance_clamped;
  emit(result, warnings);
  return 0;
}

int cmd_elliptope_section(double c, int points, const std::string& out_path) {
  const variomat::EllipseSection s = variomat::elliptope3_section(c, points);
  if (out_path.empty() || out_path == "-") {
    vio::write_matrix_csv_path("-", s.boundary);
    return 0;
  }
  vio::write_matrix_csv_path(out_path, s.boundary);
  json result;
  result["c"] = s.c;
  result["area"] = s.area;
  result["coefficients"] = {
      {"xx", s.xx}, {"yy", s.yy}, {"xy", s.xy}, {"rhs", s.rhs}};
  result["points"] = points;
  result["path"] = out_path;
  emit(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "variomat: stationary Gaussian models in the variogram-matrix "
      "parameterization.\n"
      "Matrix files are headerless CSV; model files are JSON "
      "{mu, sigma2, gamma, metadata}; '-' means stdin/stdout.\n"
      "Reproducibility: every sampling command takes --seed; equal seeds on "
      "the same build give byte-identical output. Without --seed a "
      "nondeterministic seed is drawn and reported where applicable."};
  app.require_subcommand(1);
  int exit_code = 0;

  // validate
  std::string v_path;
  double v_sigma2 = 0.0;
  auto* validate = app.add_subcommand(
      "validate", "Check a candidate variogram matrix: symmetry with zero "
                  "diagonal, conditional negative definiteness, entry "
                  "nonnegativity, and (with --sigma2) variance admissibility. "
                  "Exit 0 only if every applicable condition passes.");
  validate->add_option("matrix", v_path, "CSV matrix path or -")->required();
  auto* v_s2_opt =
      validate->add_option("--sigma2", v_sigma2,
                           "common variance to test against min_sigma2");
  validate->callback([&] {
    std::optional<double> s2;
    if (v_s2_opt->count() > 0) s2 = v_sigma2;
    exit_code = cmd_validate(v_path, s2);
  });

  // convert
  std::string c_from, c_to, c_in, c_out = "-", c_s2_out;
  double c_sigma2 = 0.0;
  auto* convert = app.add_subcommand(
      "convert", "Convert between covariance (cov), variogram (gamma) and "
                 "correlation (corr) representations. gamma -> cov/corr "
                 "needs --sigma2; cov -> * derives sigma2 = trace/n "
                 "(written via --sigma2-out for round trips).");
  convert->add_option("--from", c_from, "input kind")
      ->required()
      ->check(CLI::IsMember({"cov", "gamma"}));
  convert->add_option("--to", c_to, "output kind")
      ->required()
      ->check(CLI::IsMember({"cov", "gamma", "corr"}));
  convert->add_option("input", c_in, "CSV matrix path or -")->required();
  auto* c_s2_opt = convert->add_option(
      "--sigma2", c_sigma2, "common variance (required for gamma -> cov/corr)");
  convert->add_option("-o,--output", c_out, "output path (default stdout)");
  convert->add_option("--sigma2-out", c_s2_out,
                      "write the sigma2 that pairs with the output matrix "
                      "to this file");
  convert->callback([&] {
    std::optional<double> s2;
    if (c_s2_opt->count() > 0) s2 = c_sigma2;
    exit_code = cmd_convert(c_from, c_to, c_in, s2, c_out, c_s2_out);
  });

  // likelihood
  std::string l_model, l_data;
  auto* likelihood = app.add_subcommand(
      "likelihood", "Gaussian log-likelihood of CSV data rows under a model "
                    "file (each row one draw of the n-vector).");
  likelihood->add_option("model", l_model, "model JSON path or -")->required();
  likelihood->add_option("data", l_data, "CSV data path or -")->required();
  likelihood->callback([&] { exit_code = cmd_likelihood(l_model, l_data); });

  // estimate
  std::string e_data, e_out;
  auto* estimate = app.add_subcommand(
      "estimate", "Projection estimator: mu from the grand mean, gamma from "
                  "the empirical variogram of the centered draws, sigma2 set "
                  "to min_sigma2(gamma_hat). Writes a model file.");
  estimate->add_option("data", e_data, "CSV data path or -")->required();
  estimate->add_option("-o,--output", e_out,
                       "model output path (default: model JSON to stdout)");
  estimate->callback([&] { exit_code = cmd_estimate(e_data, e_out); });

  // simulate
  std::string s_model, s_out = "-";
  Eigen::Index s_count = 1;
  std::uint64_t s_seed = 0;
  auto* simulate = app.add_subcommand(
      "simulate", "Draw zero-mean fields with the model's variogram (the "
                  "projected representation; the model mu is not added). "
                  "One CSV row per draw.");
  simulate->add_option("model", s_model, "model JSON path or -")->required();
  simulate->add_option("--count", s_count, "number of draws")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* s_seed_opt =
      simulate->add_option("--seed", s_seed, "64-bit RNG seed");
  simulate->add_option("-o,--output", s_out, "output path (default stdout)");
  simulate->callback([&] {
    std::optional<std::uint64_t> seed;
    if (s_seed_opt->count() > 0) seed = s_seed;
    exit_code = cmd_simulate(s_model, s_count, seed, s_out);
  });

  // sample-prior
  std::string p_method, p_out;
  Eigen::Index p_n = 3, p_count = 1;
  std::uint64_t p_seed = 0, p_budget = 10'000'000;
  auto* prior = app.add_subcommand(
      "sample-prior", "Draw correlation matrices: 'rejection' (uniform on "
                      "the body; acceptance stats reported), 'gram' "
                      "(normalized Gaussian columns), or 'cholesky' (factor "
                      "rows uniform on hemispheres). Stats JSON on stdout; "
                      "matrices as blank-line-separated CSV blocks via -o.");
  prior->add_option("--method", p_method, "sampler")
      ->required()
      ->check(CLI::IsMember({"rejection", "gram", "cholesky"}));
  prior->add_option("--n", p_n, "matrix dimension")->required();
  prior->add_option("--count", p_count, "number of draws")->required();
  auto* p_seed_opt = prior->add_option("--seed", p_seed, "64-bit RNG seed");
  prior->add_option("--max-draws", p_budget,
                    "rejection attempt budget (default 1e7)");
  prior->add_option("-o,--output", p_out,
                    "matrix output path ('-' sends matrices to stdout and "
                    "stats to stderr)");
  prior->callback([&] {
    std::optional<std::uint64_t> seed;
    if (p_seed_opt->count() > 0) seed = p_seed;
    exit_code = cmd_sample_prior(p_method, p_n, p_count, seed, p_budget, p_out);
  });

  // predict
  std::string k_model, k_data, k_cov_row;
  auto* predict = app.add_subcommand(
      "predict", "Kriging prediction at an untried location: model file for "
                 "the observed block, CSV observations, and --cov-row with "
                 "sigma0^2 followed by the cross-covariances.");
  predict->add_option("model", k_model, "model JSON path or -")->required();
  predict->add_option("data", k_data, "CSV observations (single row/column)")
      ->required();
  predict->add_option("--cov-row", k_cov_row,
                      "CSV row [sigma0^2, cov(Y0,Y1), ..., cov(Y0,Yn)]")
      ->required();
  predict->callback(
      [&] { exit_code = cmd_predict(k_model, k_data, k_cov_row); });

  // elliptope-section
  double es_c = 0.0;
  int es_points = 256;
  std::string es_out;
  auto* section = app.add_subcommand(
      "elliptope-section", "Boundary polyline of the 3x3 correlation body's "
                           "horizontal section z = c, as CSV x,y rows.");
  section->add_option("--c", es_c, "section height in [-1, 1]")->required();
  section->add_option("--points", es_points, "boundary point count");
  section->add_option("-o,--output", es_out,
                      "CSV output path (stats JSON moves to stdout)");
  section->callback(
      [&] { exit_code = cmd_elliptope_section(es_c, es_points, es_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const vio::IoError& e) {
    emit_error(std::cerr, "io", e.what());
    return 2;
  } catch (const variomat::Error& e) {
    emit_error(std::cerr, error_type(e), e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error(std::cerr, "internal", e.what());
    return 2;
  }
  return exit_code;
}
