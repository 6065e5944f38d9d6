#include "covdesign/kernels.h"

#include <atomic>
#include <cstdlib>
#include <string>

#include "covdesign/error.h"
#include "kernels_internal.h"

namespace covdesign::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(COVDESIGN_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select_default() {
  if (const char* env = std::getenv("COVDESIGN_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &detail::scalar_kernels();
    if (want == "avx2" && isa_available(Isa::kAvx2)) return table_for(Isa::kAvx2);
  }
  if (isa_available(Isa::kAvx2)) return table_for(Isa::kAvx2);
  return &detail::scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{select_default()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return detail::scalar_kernels(); }

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable* table_for(Isa isa) {
  if (!isa_available(isa)) return nullptr;
  switch (isa) {
    case Isa::kScalar:
      return &detail::scalar_kernels();
    case Isa::kAvx2:
#if defined(COVDESIGN_HAVE_AVX2)
      return &detail::avx2_kernels();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

Isa active_isa() { return active().isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

void force_isa(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) {
    throw InvalidArgument("kernel variant not available: " +
                          std::string(isa_name(isa)));
  }
  current().store(t, std::memory_order_release);
}

}  // namespace covdesign::kernels
