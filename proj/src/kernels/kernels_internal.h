#ifndef COVDESIGN_SRC_KERNELS_KERNELS_INTERNAL_H_
#define COVDESIGN_SRC_KERNELS_KERNELS_INTERNAL_H_

#include "covdesign/kernels.h"

namespace covdesign::kernels::detail {

const KernelTable& scalar_kernels();
#if defined(COVDESIGN_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

}  // namespace covdesign::kernels::detail

#endif  // COVDESIGN_SRC_KERNELS_KERNELS_INTERNAL_H_
