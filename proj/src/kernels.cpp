#include "spinorlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace spinorlab::kernels {

namespace {

using detail::Ops;

Backend detect() {
    const char* env = std::getenv("SPINORLAB_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Backend::Scalar;
#if defined(__x86_64__)
    if (env && std::strcmp(env, "avx2") == 0) return Backend::Avx2;
    if ((!env || std::strcmp(env, "auto") == 0) && detail::avx2_supported())
        return Backend::Avx2;
#endif
#if defined(__aarch64__)
    if (!env || std::strcmp(env, "auto") == 0 || std::strcmp(env, "neon") == 0)
        return Backend::Neon;
#endif
    return Backend::Scalar;
}

struct State {
    Backend backend;
    const Ops* ops;
};

State& state() {
    static State s = [] {
        Backend b = detect();
        State st{b, &detail::scalar_ops()};
#if defined(__x86_64__)
        if (b == Backend::Avx2) st.ops = &detail::avx2_ops();
#endif
#if defined(__aarch64__)
        if (b == Backend::Neon) st.ops = &detail::neon_ops();
#endif
        return st;
    }();
    return s;
}

}  // namespace

Backend active_backend() { return state().backend; }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
        default: return "scalar";
    }
}

bool set_backend(Backend b) {
    switch (b) {
        case Backend::Scalar:
            state() = {b, &detail::scalar_ops()};
            return true;
#if defined(__x86_64__)
        case Backend::Avx2:
            if (!detail::avx2_supported()) return false;
            state() = {b, &detail::avx2_ops()};
            return true;
#endif
#if defined(__aarch64__)
        case Backend::Neon:
            state() = {b, &detail::neon_ops()};
            return true;
#endif
        default:
            return false;
    }
}

void axpy(double a, const double* x, double* y, size_t n) { state().ops->axpy(a, x, y, n); }
void mul_inplace(double* v, const double* w, size_t n) { state().ops->mul_inplace(v, w, n); }
void scale(double* v, double a, size_t n) { state().ops->scale(v, a, n); }
double dot(const double* x, const double* y, size_t n) { return state().ops->dot(x, y, n); }
double sum(const double* x, size_t n) { return state().ops->sum(x, n); }
void bond_butterfly(double* v, size_t n, size_t stride, double a) {
    state().ops->bond_butterfly(v, n, stride, a);
}

}  // namespace spinorlab::kernels
