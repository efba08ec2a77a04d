#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference version and
// ISA-specific variants; the variant is picked once per process from the CPU
// features (override with SPDE_KERNELS=scalar|avx2|neon).
//
// Variants are equivalent up to floating-point reassociation: reductions may
// use several partial accumulators and FMA, so results agree to rounding, not
// bit-for-bit. Within one process the choice is fixed, so runs stay
// reproducible.

namespace spde::kernels {

struct KernelTable {
    std::string_view name;

    /// x[i] = decay[i] * x[i] + scale[i] * z[i]
    void (*ou_advance)(double* x, const double* decay, const double* scale, const double* z,
                       std::size_t n);

    /// dst[i] += src[i]
    void (*accumulate)(double* dst, const double* src, std::size_t n);

    /// dst_last[-i] -= src[i] for i in [0, n), i.e. subtract src reversed so
    /// that src[0] lands on dst_last.
    void (*subtract_reversed)(double* dst_last, const double* src, std::size_t n);

    /// out[i] = a[i] * b[i]
    void (*multiply)(double* out, const double* a, const double* b, std::size_t n);

    /// sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    /// sum_{i=1}^{n-1} (v[i] - v[i-1])^2
    double (*squared_increments)(const double* v, std::size_t n);

    /// sum_{i=1}^{n-1} (v[i] - phi * v[i-1])^2
    double (*ar1_residual_ss)(const double* v, std::size_t n, double phi);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the variant is not compiled in or the CPU lacks the features.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

/// The table selected for this process.
const KernelTable& active() noexcept;

}  // namespace spde::kernels
