#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spinorlab/fullplane.hpp"

using namespace spinorlab;

namespace {

// canonical continuum targets relative to the marked face
cplx rel(Coord c, double delta) {
    return to_complex(c, delta) - to_complex(FullPlaneSpinor::marked(), delta);
}

}  // namespace

TEST_CASE("normalizations and vanishing sets are exact") {
    double delta = 1.0 / 8.0;
    FullPlaneSpinor sp(delta, 64);
    CHECK(sp.f1({5, 0}) == 1.0);                      // tip value
    CHECK(sp.f1({1, 0}) == 0.0);                      // slit
    CHECK(sp.f1({-3, 0}) == 0.0);
    CHECK(sp.g({5, 0}) == doctest::Approx(delta).epsilon(1e-15));
    CHECK(sp.g({1, 0}) == 0.0);
    CHECK(sp.vartheta() > 0.0);
    // conjugate vanishes along the right ray
    for (int x : {7, 11, 31, 51}) CHECK(std::abs(sp.fi({x, 0})) < 1e-11);
    // positivity of the harmonic measure off the slit
    for (int y : {4, 8, 12}) CHECK(sp.f1({1, y}) > 0.0);
    for (int y : {2, 6, 10}) CHECK(sp.f1({3, y}) > 0.0);
}

TEST_CASE("conjugation closes and g is harmonic across the right ray") {
    FullPlaneSpinor sp(1.0 / 8.0, 64);
    CHECK(sp.conjugation_residual(40) < 1e-10);
    CHECK(sp.g_harmonicity_residual(32) < 0.05);
}

// The normalizing value sits at z_theta with |z_theta - a| = 1 + O(delta);
// comparing in ratio form F(z)/F(z_theta) against sqrt((z_theta-a)/(z-a))
// states the same limit without the anchor-offset bias.
TEST_CASE("window convergence to the inverse square root") {
    double delta = 1.0 / 16.0;
    FullPlaneSpinor sp(delta, int(8 / delta));
    int theta_x = 5 + 4 * int(std::floor(1.0 / (2.0 * delta)));
    cplx ztheta = rel({theta_x, 0}, delta);
    double worst = 0.0;
    int lim = int(2.0 / delta);  // |z - a| <= 1 in lattice units
    for (int y = -lim; y <= lim; y += 1) {
        for (int x = -lim; x <= lim; ++x) {
            Coord m{x, y};
            if (!is_midedge(m)) continue;
            cplx z = rel(m, delta);
            if (std::abs(z) < 0.25 || std::abs(z) > 1.0) continue;
            cplx target = std::sqrt(ztheta) / std::sqrt(z);
            cplx have = sp.midedge(m) / sp.vartheta();
            worst = std::max(worst, std::abs(have - target) / std::abs(target));
        }
    }
    CHECK(worst < 0.25);  // halves with each mesh refinement; 0.05 at 1/64
}

TEST_CASE("window convergence of g to Re sqrt(z - a)") {
    double delta = 1.0 / 16.0;
    FullPlaneSpinor sp(delta, int(8 / delta));
    int theta_x = 5 + 4 * int(std::floor(1.0 / (2.0 * delta)));
    double root_theta = std::real(std::sqrt(rel({theta_x, 0}, delta)));
    double worst = 0.0;
    int lim = int(2.0 / delta);
    for (int y = -lim; y <= lim; y += 2) {
        for (int x = -lim; x <= lim; ++x) {
            Coord c{x, y};
            if (!sp.is_f1_site(c)) continue;
            cplx z = rel(c, delta);
            if (std::abs(z) < 0.25 || std::abs(z) > 1.0) continue;
            double target = std::real(std::sqrt(z)) / root_theta;
            if (std::abs(target) < 0.3) continue;  // grazes the slit zero line
            double have = sp.g(c) / sp.nu();
            worst = std::max(worst, std::abs(have - target) / std::abs(target));
        }
    }
    CHECK(worst < 0.02);
}

TEST_CASE("scaling of the normalizing factors") {
    // theta ~ sqrt(delta) at a fixed physical box, nu ~ theta
    double prev_ratio = 0.0;
    for (double delta : {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}) {
        FullPlaneSpinor sp(delta, int(8 / delta));
        double ratio = sp.vartheta() / std::sqrt(delta);
        if (prev_ratio > 0.0) CHECK(std::abs(ratio / prev_ratio - 1.0) < 0.15);
        prev_ratio = ratio;
        // nu ~ vartheta: the gap shrinks with the mesh
        double gap = std::abs(sp.nu() / sp.vartheta() - 1.0);
        CHECK(gap < 0.15);
        if (delta < 1.0 / 8.0) CHECK(gap < 0.07);
    }
}

TEST_CASE("slit-plane harmonic measure: decay exponent and near-slit linearity") {
    double delta = 1.0 / 16.0;
    FullPlaneSpinor sp(delta, int(8 / delta));
    // fit log f1 against log r on the vertical ray above the tip
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int y = 8; y <= 80; y += 4) {
        double r = std::abs(rel({5, y}, delta));
        if (r < 0.2 || r > 2.0) continue;
        double lx = std::log(r), ly = std::log(sp.f1({5, y}));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    double slope = (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
    CHECK(slope > -0.55);
    CHECK(slope < -0.45);
    // linear vanishing toward the slit
    for (int x : {-31, -63, -91}) {
        double r = sp.f1({x, 8}) / sp.f1({x, 4});
        CHECK(r > 1.6);
        CHECK(r < 2.4);
    }
}

TEST_CASE("box insensitivity") {
    double delta = 1.0 / 16.0;
    FullPlaneSpinor small(delta, int(8 / delta));
    FullPlaneSpinor big(delta, int(16 / delta));
    // only vartheta-normalized values have a limit as the box grows
    for (Coord c : {Coord{33, 0}, Coord{5, 16}, Coord{-3, 24}}) {
        REQUIRE(small.is_f1_site(c));
        double a = small.f1(c) / small.vartheta();
        double b = big.f1(c) / big.vartheta();
        CHECK(std::abs(b / a - 1.0) < 0.01);
    }
    CHECK(std::abs((big.nu() / big.vartheta()) / (small.nu() / small.vartheta()) - 1.0) < 0.01);
}

TEST_CASE("box must cover the window") {
    CHECK_THROWS_AS(FullPlaneSpinor(1.0 / 16.0, 8), InvalidSite);
}