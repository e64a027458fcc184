#include <cstdlib>
#include <string_view>

#include "kernels/kernels_internal.hpp"

namespace rlsw::kernels {

const KernelTable* avx2() {
#if defined(RLSW_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* force = std::getenv("RLSW_FORCE_SCALAR");
    if (force != nullptr && std::string_view(force) == "1") return scalar();
    if (const KernelTable* t = avx2()) return *t;
    return scalar();
  }();
  return table;
}

}  // namespace rlsw::kernels
