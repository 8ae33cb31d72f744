#include "spinorlab/kernels.hpp"

namespace spinorlab::kernels::detail {

namespace {

void axpy_s(double a, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void mul_inplace_s(double* v, const double* w, size_t n) {
    for (size_t i = 0; i < n; ++i) v[i] *= w[i];
}

void scale_s(double* v, double a, size_t n) {
    for (size_t i = 0; i < n; ++i) v[i] *= a;
}

// Stride-4 partials, combined (0+2) + (1+3) then outer sum; the SIMD
// variants reproduce this tree exactly.
double dot_s(const double* x, const double* y, size_t n) {
    double p[4] = {0, 0, 0, 0};
    size_t n4 = n & ~size_t(3);
    for (size_t i = 0; i < n4; i += 4) {
        p[0] += x[i] * y[i];
        p[1] += x[i + 1] * y[i + 1];
        p[2] += x[i + 2] * y[i + 2];
        p[3] += x[i + 3] * y[i + 3];
    }
    double tail = 0;
    for (size_t i = n4; i < n; ++i) tail += x[i] * y[i];
    return ((p[0] + p[2]) + (p[1] + p[3])) + tail;
}

double sum_s(const double* x, size_t n) {
    double p[4] = {0, 0, 0, 0};
    size_t n4 = n & ~size_t(3);
    for (size_t i = 0; i < n4; i += 4) {
        p[0] += x[i];
        p[1] += x[i + 1];
        p[2] += x[i + 2];
        p[3] += x[i + 3];
    }
    double tail = 0;
    for (size_t i = n4; i < n; ++i) tail += x[i];
    return ((p[0] + p[2]) + (p[1] + p[3])) + tail;
}

void bond_butterfly_s(double* v, size_t n, size_t stride, double a) {
    for (size_t base = 0; base < n; base += 2 * stride) {
        double* lo = v + base;
        double* hi = v + base + stride;
        for (size_t i = 0; i < stride; ++i) {
            double l = lo[i], h = hi[i];
            lo[i] = l + a * h;
            hi[i] = h + a * l;
        }
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{axpy_s, mul_inplace_s, scale_s, dot_s, sum_s, bond_butterfly_s};
    return ops;
}

}  // namespace spinorlab::kernels::detail
