// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "variants.hpp"

namespace spde::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void ou_advance(double* x, const double* decay, const double* scale, const double* z,
                std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d noise = _mm256_mul_pd(_mm256_loadu_pd(scale + i), _mm256_loadu_pd(z + i));
        _mm256_storeu_pd(x + i,
                         _mm256_fmadd_pd(_mm256_loadu_pd(decay + i), _mm256_loadu_pd(x + i), noise));
    }
    for (; i < n; ++i) x[i] = decay[i] * x[i] + scale[i] * z[i];
}

void accumulate(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
    }
    for (; i < n; ++i) dst[i] += src[i];
}

void subtract_reversed(double* dst_last, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // src[i..i+3] reversed lines up with dst_last[-i-3 .. -i].
        double* d = dst_last - i - 3;
        const __m256d s = _mm256_permute4x64_pd(_mm256_loadu_pd(src + i), 0x1B);
        _mm256_storeu_pd(d, _mm256_sub_pd(_mm256_loadu_pd(d), s));
    }
    for (; i < n; ++i) *(dst_last - i) -= src[i];
}

void multiply(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double squared_increments(const double* v, std::size_t n) {
    if (n < 2) return 0.0;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 1;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(v + i - 1));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double d = v[i] - v[i - 1];
        total += d * d;
    }
    return total;
}

double ar1_residual_ss(const double* v, std::size_t n, double phi) {
    if (n < 2) return 0.0;
    const __m256d vphi = _mm256_set1_pd(phi);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 1;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fnmadd_pd(vphi, _mm256_loadu_pd(v + i - 1), _mm256_loadu_pd(v + i));
        acc = _mm256_fmadd_pd(r, r, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double r = v[i] - phi * v[i - 1];
        total += r * r;
    }
    return total;
}

constexpr KernelTable kAvx2{
    "avx2",   ou_advance, accumulate,         subtract_reversed,
    multiply, dot,        squared_increments, ar1_residual_ss,
};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace spde::kernels::detail
