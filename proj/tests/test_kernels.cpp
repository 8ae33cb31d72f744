#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spinorlab/kernels.hpp"

using namespace spinorlab::kernels;

namespace {

std::vector<double> random_vec(size_t n, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::Scalar};
    if (set_backend(Backend::Avx2)) out.push_back(Backend::Avx2);
    if (set_backend(Backend::Neon)) out.push_back(Backend::Neon);
    set_backend(Backend::Scalar);
    return out;
}

}  // namespace

TEST_CASE("all available backends produce bit-identical results") {
    auto backends = available_backends();
    INFO("backends available: " << backends.size());
    for (size_t n : {size_t(1), size_t(7), size_t(64), size_t(1000), size_t(4096)}) {
        auto x = random_vec(n, 1), y0 = random_vec(n, 2);
        // reference pass
        REQUIRE(set_backend(Backend::Scalar));
        auto y_ref = y0;
        axpy(0.37, x.data(), y_ref.data(), n);
        auto m_ref = y0;
        mul_inplace(m_ref.data(), x.data(), n);
        auto s_ref = y0;
        scale(s_ref.data(), 1.618, n);
        double dot_ref = dot(x.data(), y0.data(), n);
        double sum_ref = sum(x.data(), n);

        for (Backend b : backends) {
            REQUIRE(set_backend(b));
            auto y = y0;
            axpy(0.37, x.data(), y.data(), n);
            CHECK(y == y_ref);
            auto m = y0;
            mul_inplace(m.data(), x.data(), n);
            CHECK(m == m_ref);
            auto s = y0;
            scale(s.data(), 1.618, n);
            CHECK(s == s_ref);
            CHECK(dot(x.data(), y0.data(), n) == dot_ref);
            CHECK(sum(x.data(), n) == sum_ref);
        }
    }
    set_backend(Backend::Scalar);
}

TEST_CASE("bond butterfly matches the direct pair transform on every backend") {
    auto backends = available_backends();
    for (size_t bits : {size_t(3), size_t(6), size_t(10)}) {
        size_t n = size_t(1) << bits;
        auto v0 = random_vec(n, 3);
        for (size_t bit = 0; bit < bits; ++bit) {
            size_t stride = size_t(1) << bit;
            // direct reference
            auto want = v0;
            for (size_t s = 0; s < n; ++s) {
                if (s & stride) continue;
                double lo = v0[s], hi = v0[s | stride];
                want[s] = lo + 0.4142 * hi;
                want[s | stride] = hi + 0.4142 * lo;
            }
            for (Backend b : backends) {
                REQUIRE(set_backend(b));
                auto v = v0;
                bond_butterfly(v.data(), n, stride, 0.4142);
                CHECK(v == want);
            }
        }
    }
    set_backend(Backend::Scalar);
}

TEST_CASE("backend dispatch reports a valid active backend") {
    Backend b = active_backend();
    CHECK((b == Backend::Scalar || b == Backend::Avx2 || b == Backend::Neon));
    CHECK(backend_name(b) != nullptr);
#if defined(__x86_64__)
    // scalar is always accepted; the vector backend only if supported
    CHECK(set_backend(Backend::Scalar));
    CHECK_FALSE(set_backend(Backend::Neon));
#endif
    set_backend(Backend::Scalar);
}