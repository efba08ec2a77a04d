#include <arm_neon.h>

#include "variants.hpp"

namespace spde::kernels::detail {

namespace {

void ou_advance(double* x, const double* decay, const double* scale, const double* z,
                std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t noise = vmulq_f64(vld1q_f64(scale + i), vld1q_f64(z + i));
        vst1q_f64(x + i, vfmaq_f64(noise, vld1q_f64(decay + i), vld1q_f64(x + i)));
    }
    for (; i < n; ++i) x[i] = decay[i] * x[i] + scale[i] * z[i];
}

void accumulate(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), vld1q_f64(src + i)));
    for (; i < n; ++i) dst[i] += src[i];
}

void subtract_reversed(double* dst_last, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        double* d = dst_last - i - 1;
        const float64x2_t s = vextq_f64(vld1q_f64(src + i), vld1q_f64(src + i), 1);
        vst1q_f64(d, vsubq_f64(vld1q_f64(d), s));
    }
    for (; i < n; ++i) *(dst_last - i) -= src[i];
}

void multiply(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double squared_increments(const double* v, std::size_t n) {
    if (n < 2) return 0.0;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 1;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(v + i), vld1q_f64(v + i - 1));
        acc = vfmaq_f64(acc, d, d);
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = v[i] - v[i - 1];
        total += d * d;
    }
    return total;
}

double ar1_residual_ss(const double* v, std::size_t n, double phi) {
    if (n < 2) return 0.0;
    const float64x2_t vphi = vdupq_n_f64(phi);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 1;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t r = vfmsq_f64(vld1q_f64(v + i), vphi, vld1q_f64(v + i - 1));
        acc = vfmaq_f64(acc, r, r);
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double r = v[i] - phi * v[i - 1];
        total += r * r;
    }
    return total;
}

constexpr KernelTable kNeon{
    "neon",   ou_advance, accumulate,         subtract_reversed,
    multiply, dot,        squared_increments, ar1_residual_ss,
};

}  // namespace

const KernelTable& neon_table() noexcept { return kNeon; }

}  // namespace spde::kernels::detail
