#pragma once

#include "rlsw/kernels.hpp"

namespace rlsw::kernels::detail {

#if defined(RLSW_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace rlsw::kernels::detail
