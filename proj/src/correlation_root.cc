#include "covdesign/correlation_root.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "covdesign/error.h"
#include "covdesign/kernels.h"

namespace covdesign {

Matrix project_rows(const Matrix& root) {
  Matrix out = root;
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    const double norm = std::sqrt(k.dot(row.data(), row.data(), row.size()));
    if (norm < 1e-12) {
      std::fill(row.begin(), row.end(), 0.0);
      if (i < row.size()) row[i] = 1.0;
      continue;
    }
    for (double& v : row) v /= norm;
  }
  return out;
}

double max_row_norm_error(const Matrix& root) {
  double worst = 0.0;
  for (std::size_t i = 0; i < root.rows(); ++i) {
    const auto row = root.row(i);
    double s = 0.0;
    for (double v : row) s += v * v;
    worst = std::max(worst, std::abs(std::sqrt(s) - 1.0));
  }
  return worst;
}

Matrix covariance_from_root(const Matrix& root) {
  Matrix x = multiply_abt(root, root);
  const std::size_t k = x.rows();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      x(i, j) = i == j ? 0.25
                       : std::asin(std::clamp(x(i, j), -1.0, 1.0)) / (2.0 * std::numbers::pi);
    }
  }
  // Symmetrise exactly; the two dot products can differ in the last bit.
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) x(j, i) = x(i, j);
  return x;
}

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ParseError(path.string(), lineno, "bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path.string(), lineno, "ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path.string(), lineno, "empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace covdesign
