#ifndef COVDESIGN_KERNELS_H_
#define COVDESIGN_KERNELS_H_

// Data-parallel inner loops used by the optimizer, the samplers and the
// estimators. Each kernel has a scalar reference implementation and, on x86-64,
// an AVX2 variant. The variant is picked once at startup from CPUID; setting
// COVDESIGN_ISA=scalar in the environment forces the reference path.
//
// Elementwise kernels (adam_update, sign_mask) are bit-identical across
// variants. Reductions (dot, gemm_abt, signed_sum) use a different summation
// order in the SIMD path and agree to rounding only.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace covdesign::kernels {

enum class Isa { kScalar, kAvx2 };

struct AdamCoeffs {
  double lr;
  double beta1;
  double beta2;
  double eps;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[m x n] = a[m x k] * b[n x k]^T, all row-major.
  void (*gemm_abt)(const double* a, const double* b, double* out,
                   std::size_t m, std::size_t n, std::size_t k);
  void (*adam_update)(double* param, double* m, double* v, const double* grad,
                      std::size_t n, const AdamCoeffs& c);
  // out[i] = x[i] >= 0 ? 1 : 0; sgn(0) counts as positive.
  void (*sign_mask)(const double* x, std::uint8_t* out, std::size_t n);
  // sum_i (2 z_i - 1) y_i
  double (*signed_sum)(const std::uint8_t* z, const double* y, std::size_t n);
};

const KernelTable& scalar_table();
// Null when the variant was not compiled in or the CPU lacks it.
const KernelTable* table_for(Isa isa);
bool isa_available(Isa isa);

// The table selected for this process.
const KernelTable& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

// Test hook: switch the process-wide table. Throws if unavailable.
void force_isa(Isa isa);

}  // namespace covdesign::kernels

#endif  // COVDESIGN_KERNELS_H_
