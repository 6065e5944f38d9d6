#ifndef COVDESIGN_CORRELATION_ROOT_H_
#define COVDESIGN_CORRELATION_ROOT_H_

#include <filesystem>

#include "covdesign/matrix.h"

namespace covdesign {

// A K x K matrix R whose rows are unit vectors. The Gram matrix A = R R^T is
// then a valid correlation matrix, and t = (1 + sgn(R eta)) / 2 with
// eta ~ N(0, I) is a balanced binary vector with covariance
// X(R) = arcsin(A) / (2 pi).

// Divides each row by its 2-norm. A row with norm below 1e-12 is replaced by
// the matching standard basis row.
Matrix project_rows(const Matrix& root);

// max_k | ||row_k|| - 1 |
double max_row_norm_error(const Matrix& root);

// X(R). The diagonal is exactly 1/4; off-diagonal Gram entries are clamped
// into [-1, 1] before arcsin.
Matrix covariance_from_root(const Matrix& root);

// Dense CSV, one matrix row per line, 17 significant digits.
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace covdesign

#endif  // COVDESIGN_CORRELATION_ROOT_H_
