#include <cstdlib>
#include <string_view>

#include "variants.hpp"

namespace spde::kernels {

const KernelTable* avx2_kernels() noexcept {
#if defined(SPDE_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_kernels() noexcept {
#if defined(SPDE_HAVE_NEON)
    return &detail::neon_table();  // Advanced SIMD is mandatory on AArch64.
#else
    return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
    const char* env = std::getenv("SPDE_KERNELS");
    const std::string_view request = env ? env : "";
    if (request == "scalar") return scalar_kernels();
    if (request == "avx2" || request.empty()) {
        if (const auto* t = avx2_kernels()) return *t;
    }
    if (request == "neon" || request.empty()) {
        if (const auto* t = neon_kernels()) return *t;
    }
    return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

}  // namespace spde::kernels
