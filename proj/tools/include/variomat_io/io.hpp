#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace variomat::io {

/// File access or parse failure; the CLI maps this to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, enough to reproduce any double exactly.
std::string format_number(double v);

/// Plain comma-separated numeric rows, no header. Blank lines are skipped;
/// every row must have the same number of fields.
Eigen::MatrixXd read_matrix_csv(std::istream& in, const std::string& what);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

/// Path versions; "-" means stdin/stdout.
Eigen::MatrixXd read_matrix_csv_path(const std::string& path);
void write_matrix_csv_path(const std::string& path, const Eigen::MatrixXd& m);

/// Serialized model: {"mu": .., "sigma2": .., "gamma": [[..],..],
/// "metadata": {string: string}}. Structural problems are IoError; whether
/// the content is a valid model is the caller's (domain) concern.
struct ModelFile {
  double mu = 0.0;
  double sigma2 = 1.0;
  Eigen::MatrixXd gamma;
  std::map<std::string, std::string> metadata;
};

nlohmann::json model_to_json(const ModelFile& m);
ModelFile model_from_json(const nlohmann::json& j);

ModelFile read_model_path(const std::string& path);
void write_model_path(const std::string& path, const ModelFile& m);

/// Matrix <-> row-major array-of-arrays JSON payload.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j,
                                 const std::string& what);

}  // namespace variomat::io
