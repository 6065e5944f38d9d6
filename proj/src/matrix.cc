#include "covdesign/matrix.h"

#include <algorithm>
#include <cmath>

#include "covdesign/error.h"
#include "covdesign/kernels.h"

namespace covdesign {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix multiply_abt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw InvalidArgument("multiply_abt: inner size mismatch");
  Matrix out(a.rows(), b.rows());
  kernels::active().gemm_abt(a.data(), b.data(), out.data(), a.rows(), b.rows(),
                             a.cols());
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("multiply: inner size mismatch");
  return multiply_abt(a, b.transpose());
}

double trace_of_product(const Matrix& a, const Matrix& b) {
  if (!a.square() || !b.square() || a.rows() != b.rows())
    throw InvalidArgument("trace_of_product: dimension mismatch");
  // trace(AB) = sum_ij A_ij B_ji; both operands are symmetric in every caller
  // but the general form costs nothing extra.
  double s = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * b(j, i);
  return s;
}

double bilinear(std::span<const double> x, const Matrix& a,
                std::span<const double> y) {
  if (x.size() != a.rows() || y.size() != a.cols())
    throw InvalidArgument("bilinear: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (x[i] == 0.0) continue;
    s += x[i] * kernels::active().dot(a.row(i).data(), y.data(), y.size());
  }
  return s;
}

double sum(const Matrix& a) {
  double s = 0.0;
  for (double v : a.flat()) s += v;
  return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidArgument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i)
    m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
  return m;
}

Matrix operator*(const Matrix& a, double s) {
  Matrix out = a;
  for (double& x : out.flat()) x *= s;
  return out;
}

}  // namespace covdesign
