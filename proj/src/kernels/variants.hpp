#pragma once

#include "spde/kernels.hpp"

namespace spde::kernels::detail {

#if defined(SPDE_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(SPDE_HAVE_NEON)
const KernelTable& neon_table() noexcept;
#endif

}  // namespace spde::kernels::detail
