#include "variomat_io/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace variomat::io {

namespace {

bool parse_double(std::string_view token, double& out) {
  // trim surrounding whitespace
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) {
    token.remove_prefix(1);
  }
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' ||
                            token.back() == '\r')) {
    token.remove_suffix(1);
  }
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::MatrixXd read_matrix_csv(std::istream& in, const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    // tolerate blank lines (also covers trailing newlines)
    bool blank = true;
    for (char c : line) {
      if (c != ' ' && c != '\t' && c != '\r') {
        blank = false;
        break;
      }
    }
    if (blank) continue;

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view token =
          std::string_view(line).substr(start, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - start);
      double v = 0.0;
      if (!parse_double(token, v)) {
        throw IoError(what + ": cannot parse '" + std::string(token) +
                      "' as a number (row " + std::to_string(rows.size() + 1) +
                      ")");
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(what + ": row " + std::to_string(rows.size() + 1) +
                    " has " + std::to_string(row.size()) + " fields, expected " +
                    std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw IoError(what + ": no data rows");
  }
  Eigen::MatrixXd m(Eigen::Index(rows.size()), Eigen::Index(rows[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[std::size_t(i)][std::size_t(j)];
    }
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv_path(const std::string& path) {
  if (path == "-") {
    return read_matrix_csv(std::cin, "stdin");
  }
  std::ifstream f(path);
  if (!f) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  return read_matrix_csv(f, path);
}

void write_matrix_csv_path(const std::string& path, const Eigen::MatrixXd& m) {
  if (path == "-") {
    write_matrix_csv(std::cout, m);
    return;
  }
  std::ofstream f(path);
  if (!f) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  write_matrix_csv(f, m);
  if (!f.good()) {
    throw IoError("write to '" + path + "' failed");
  }
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j,
                                 const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw IoError(what + ": expected a non-empty array of rows");
  }
  const std::size_t nrows = j.size();
  std::size_t ncols = 0;
  for (std::size_t i = 0; i < nrows; ++i) {
    if (!j[i].is_array() || j[i].empty()) {
      throw IoError(what + ": row " + std::to_string(i + 1) +
                    " is not a non-empty array");
    }
    if (i == 0) {
      ncols = j[i].size();
    } else if (j[i].size() != ncols) {
      throw IoError(what + ": ragged rows");
    }
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(nrows),
                    static_cast<Eigen::Index>(ncols));
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!j[i][c].is_number()) {
        throw IoError(what + ": non-numeric entry at row " +
                      std::to_string(i + 1));
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          j[i][c].get<double>();
    }
  }
  return m;
}

nlohmann::json model_to_json(const ModelFile& m) {
  nlohmann::json j;
  j["mu"] = m.mu;
  j["sigma2"] = m.sigma2;
  j["gamma"] = matrix_to_json(m.gamma);
  j["metadata"] = nlohmann::json::object();
  for (const auto& [k, v] : m.metadata) {
    j["metadata"][k] = v;
  }
  return j;
}

ModelFile model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw IoError("model: expected a JSON object");
  }
  for (const char* key : {"mu", "sigma2", "gamma"}) {
    if (!j.contains(key)) {
      throw IoError(std::string("model: missing key '") + key + "'");
    }
  }
  if (!j["mu"].is_number() || !j["sigma2"].is_number()) {
    throw IoError("model: 'mu' and 'sigma2' must be numbers");
  }
  ModelFile m;
  m.mu = j["mu"].get<double>();
  m.sigma2 = j["sigma2"].get<double>();
  m.gamma = matrix_from_json(j["gamma"], "model gamma");
  if (j.contains("metadata")) {
    if (!j["metadata"].is_object()) {
      throw IoError("model: 'metadata' must be an object");
    }
    for (const auto& [k, v] : j["metadata"].items()) {
      if (!v.is_string()) {
        throw IoError("model: metadata values must be strings");
      }
      m.metadata[k] = v.get<std::string>();
    }
  }
  return m;
}

ModelFile read_model_path(const std::string& path) {
  nlohmann::json j;
  try {
    if (path == "-") {
      j = nlohmann::json::parse(std::cin);
    } else {
      std::ifstream f(path);
      if (!f) {
        throw IoError("cannot open '" + path + "' for reading");
      }
      j = nlohmann::json::parse(f);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("model '" + path + "': " + e.what());
  }
  return model_from_json(j);
}

void write_model_path(const std::string& path, const ModelFile& m) {
  const std::string text = model_to_json(m).dump(2) + "\n";
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  f << text;
  if (!f.good()) {
    throw IoError("write to '" + path + "' failed");
  }
}

}  // namespace variomat::io
