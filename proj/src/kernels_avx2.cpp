// AVX2 kernel variants.  Compiled with -mavx2 only; dispatch guards execution
// behind a cpuid check.  No FMA: mul followed by add keeps every lane
// bit-identical to the scalar reference.

#if defined(__x86_64__)

#include <immintrin.h>

#include "spinorlab/kernels.hpp"

namespace spinorlab::kernels::detail {

namespace {

void axpy_v(double a, const double* x, double* y, size_t n) {
    __m256d va = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void mul_inplace_v(double* v, const double* w, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(w + i)));
    for (; i < n; ++i) v[i] *= w[i];
}

void scale_v(double* v, double a, size_t n) {
    __m256d va = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), va));
    for (; i < n; ++i) v[i] *= a;
}

double reduce_tree(__m256d acc) {
    alignas(32) double p[4];
    _mm256_store_pd(p, acc);
    return (p[0] + p[2]) + (p[1] + p[3]);
}

double dot_v(const double* x, const double* y, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t n4 = n & ~size_t(3);
    for (size_t i = 0; i < n4; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    double tail = 0;
    for (size_t i = n4; i < n; ++i) tail += x[i] * y[i];
    return reduce_tree(acc) + tail;
}

double sum_v(const double* x, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t n4 = n & ~size_t(3);
    for (size_t i = 0; i < n4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double tail = 0;
    for (size_t i = n4; i < n; ++i) tail += x[i];
    return reduce_tree(acc) + tail;
}

void bond_butterfly_v(double* v, size_t n, size_t stride, double a) {
    if (stride < 4) {
        scalar_ops().bond_butterfly(v, n, stride, a);
        return;
    }
    __m256d va = _mm256_set1_pd(a);
    for (size_t base = 0; base < n; base += 2 * stride) {
        double* lo = v + base;
        double* hi = v + base + stride;
        for (size_t i = 0; i < stride; i += 4) {
            __m256d l = _mm256_loadu_pd(lo + i);
            __m256d h = _mm256_loadu_pd(hi + i);
            _mm256_storeu_pd(lo + i, _mm256_add_pd(l, _mm256_mul_pd(va, h)));
            _mm256_storeu_pd(hi + i, _mm256_add_pd(h, _mm256_mul_pd(va, l)));
        }
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{axpy_v, mul_inplace_v, scale_v, dot_v, sum_v, bond_butterfly_v};
    return ops;
}

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

}  // namespace spinorlab::kernels::detail

#endif  // __x86_64__
