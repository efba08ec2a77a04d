#include "spde/kernels.hpp"

namespace spde::kernels {

namespace {

void ou_advance(double* x, const double* decay, const double* scale, const double* z,
                std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = decay[i] * x[i] + scale[i] * z[i];
}

void accumulate(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void subtract_reversed(double* dst_last, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) *(dst_last - i) -= src[i];
}

void multiply(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double squared_increments(const double* v, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = v[i] - v[i - 1];
        acc += d * d;
    }
    return acc;
}

double ar1_residual_ss(const double* v, std::size_t n, double phi) {
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double r = v[i] - phi * v[i - 1];
        acc += r * r;
    }
    return acc;
}

constexpr KernelTable kScalar{
    "scalar",     ou_advance, accumulate,         subtract_reversed,
    multiply,     dot,        squared_increments, ar1_residual_ss,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace spde::kernels
