#ifndef COVDESIGN_MATRIX_H_
#define COVDESIGN_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace covdesign {

// Dense row-major matrix of doubles. Sizes here are K x K with K in the low
// hundreds, so a plain contiguous buffer is all that is needed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix constant(std::size_t rows, std::size_t cols, double v) {
    return Matrix(rows, cols, v);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  Matrix transpose() const;
  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// A * B^T, which is the natural layout for Gram matrices of row vectors.
Matrix multiply_abt(const Matrix& a, const Matrix& b);
// A * B.
Matrix multiply(const Matrix& a, const Matrix& b);
// trace(A * B) for square A, B of equal size: sum_ij A_ij B_ji.
double trace_of_product(const Matrix& a, const Matrix& b);
// x^T A y.
double bilinear(std::span<const double> x, const Matrix& a,
                std::span<const double> y);
double sum(const Matrix& a);
Matrix operator*(const Matrix& a, double s);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace covdesign

#endif  // COVDESIGN_MATRIX_H_
