#pragma once

// Data-parallel inner-loop kernels with scalar reference implementations and
// SIMD variants selected at runtime.  All variants use the same operation
// order (no FMA contraction, stride-4 reduction trees), so results are
// bit-identical across backends; the equivalence tests assert exact equality.
//
// Backend selection: auto-detected, overridable with SPINORLAB_SIMD =
// scalar | avx2 | neon | auto.

#include <cstddef>

namespace spinorlab::kernels {

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
const char* backend_name(Backend b);
// Returns false if the requested backend is unavailable on this machine.
bool set_backend(Backend b);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, size_t n);
// v[i] *= w[i]
void mul_inplace(double* v, const double* w, size_t n);
// v[i] *= a
void scale(double* v, double a, size_t n);
// sum_i x[i] * y[i], stride-4 partial sums combined in fixed order
double dot(const double* x, const double* y, size_t n);
// sum_i x[i], same reduction tree
double sum(const double* x, size_t n);

// Transfer-matrix bond sweep: for every index pair (s, s ^ stride) with the
// stride bit clear in s, replace (lo, hi) by (lo + a*hi, hi + a*lo).
// n is the vector length, stride a power of two.
void bond_butterfly(double* v, size_t n, size_t stride, double a);

namespace detail {
struct Ops {
    void (*axpy)(double, const double*, double*, size_t);
    void (*mul_inplace)(double*, const double*, size_t);
    void (*scale)(double*, double, size_t);
    double (*dot)(const double*, const double*, size_t);
    double (*sum)(const double*, size_t);
    void (*bond_butterfly)(double*, size_t, size_t, double);
};
const Ops& scalar_ops();
#if defined(__x86_64__)
const Ops& avx2_ops();
bool avx2_supported();
#endif
#if defined(__aarch64__)
const Ops& neon_ops();
#endif
}  // namespace detail

}  // namespace spinorlab::kernels
