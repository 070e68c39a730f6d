#include <cstdlib>
#include <string_view>

#include "kqb/simd/kernels.hpp"

namespace kqb::simd {

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(KQB_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* kernels_for(Isa isa) {
  if (!isa_supported(isa)) return nullptr;
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_table;
    case Isa::avx2:
#if defined(KQB_HAVE_AVX2_KERNELS)
      return &detail::avx2_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("KQB_SIMD");
  const std::string_view choice = env ? env : "auto";
  if (choice == "scalar") return detail::scalar_table;
  if (const KernelTable* t = kernels_for(Isa::avx2)) return *t;
  return detail::scalar_table;
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& active = select();
  return active;
}

}  // namespace kqb::simd
