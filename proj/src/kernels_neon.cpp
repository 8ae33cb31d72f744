// NEON kernel variants for aarch64.  Same operation order as the scalar
// reference (no fused multiply-add), so results match bit for bit.

#if defined(__aarch64__)

#include <arm_neon.h>

#include "spinorlab/kernels.hpp"

namespace spinorlab::kernels::detail {

namespace {

void axpy_v(double a, const double* x, double* y, size_t n) {
    float64x2_t va = vdupq_n_f64(a);
    size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void mul_inplace_v(double* v, const double* w, size_t n) {
    size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(v + i, vmulq_f64(vld1q_f64(v + i), vld1q_f64(w + i)));
    for (; i < n; ++i) v[i] *= w[i];
}

void scale_v(double* v, double a, size_t n) {
    float64x2_t va = vdupq_n_f64(a);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(v + i, vmulq_f64(vld1q_f64(v + i), va));
    for (; i < n; ++i) v[i] *= a;
}

double dot_v(const double* x, const double* y, size_t n) {
    float64x2_t acc02 = vdupq_n_f64(0), acc13 = vdupq_n_f64(0);
    size_t n4 = n & ~size_t(3);
    for (size_t i = 0; i < n4; i += 4) {
        acc02 = vaddq_f64(acc02, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
        acc13 = vaddq_f64(acc13, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
    }
    double tail = 0;
    for (size_t i = n4; i < n; ++i) tail += x[i] * y[i];
    double p0 = vgetq_lane_f64(acc02, 0), p1 = vgetq_lane_f64(acc02, 1);
    double p2 = vgetq_lane_f64(acc13, 0), p3 = vgetq_lane_f64(acc13, 1);
    return ((p0 + p2) + (p1 + p3)) + tail;
}

double sum_v(const double* x, size_t n) {
    float64x2_t acc02 = vdupq_n_f64(0), acc13 = vdupq_n_f64(0);
    size_t n4 = n & ~size_t(3);
    for (size_t i = 0; i < n4; i += 4) {
        acc02 = vaddq_f64(acc02, vld1q_f64(x + i));
        acc13 = vaddq_f64(acc13, vld1q_f64(x + i + 2));
    }
    double tail = 0;
    for (size_t i = n4; i < n; ++i) tail += x[i];
    double p0 = vgetq_lane_f64(acc02, 0), p1 = vgetq_lane_f64(acc02, 1);
    double p2 = vgetq_lane_f64(acc13, 0), p3 = vgetq_lane_f64(acc13, 1);
    return ((p0 + p2) + (p1 + p3)) + tail;
}

void bond_butterfly_v(double* v, size_t n, size_t stride, double a) {
    if (stride < 2) {
        scalar_ops().bond_butterfly(v, n, stride, a);
        return;
    }
    float64x2_t va = vdupq_n_f64(a);
    for (size_t base = 0; base < n; base += 2 * stride) {
        double* lo = v + base;
        double* hi = v + base + stride;
        for (size_t i = 0; i < stride; i += 2) {
            float64x2_t l = vld1q_f64(lo + i);
            float64x2_t h = vld1q_f64(hi + i);
            vst1q_f64(lo + i, vaddq_f64(l, vmulq_f64(va, h)));
            vst1q_f64(hi + i, vaddq_f64(h, vmulq_f64(va, l)));
        }
    }
}

}  // namespace

const Ops& neon_ops() {
    static const Ops ops{axpy_v, mul_inplace_v, scale_v, dot_v, sum_v, bond_butterfly_v};
    return ops;
}

}  // namespace spinorlab::kernels::detail

#endif  // __aarch64__
