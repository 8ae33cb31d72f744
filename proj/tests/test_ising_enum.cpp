#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spinorlab/ising.hpp"

using namespace spinorlab;

namespace {
const double a2 = weights::alpha_c * weights::alpha_c;
const double a4 = a2 * a2;
const double a6 = a4 * a2;
}  // namespace

TEST_CASE("critical weights identity") {
    CHECK(std::abs(std::exp(-2.0 * weights::beta_c) - weights::alpha_c) < 3e-16);
}

TEST_CASE("single face: magnetization and signed sums") {
    auto dom = DiscreteDomain::rectangle(1, 1);
    Coord a = dom.faces()[0];
    auto e = enumerate_correlation(dom, BoundaryCond::PlusFaces, {a});
    // two configurations: empty and the four sides of the face
    CHECK(e.value == doctest::Approx((1 - a4) / (1 + a4)).epsilon(1e-15));
    CHECK(e.value == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-15));
    CHECK(e.stderr_ == 0.0);

    CHECK(signed_partition_sum(dom, {a}) == doctest::Approx(1 - a4).epsilon(1e-15));
    CHECK(partition_sum(dom) == doctest::Approx(1 + a4).epsilon(1e-15));
    // normalization: empty marked list
    CHECK(enumerate_correlation(dom, BoundaryCond::PlusFaces, {}).value == 1.0);
}

TEST_CASE("domino: pair correlation") {
    auto dom = DiscreteDomain::rectangle(2, 1);
    Coord a = dom.faces()[0], b = dom.faces()[1];
    double expect = (1 + a6 - 2 * a4) / (1 + a6 + 2 * a4);
    auto e = enumerate_correlation(dom, BoundaryCond::PlusFaces, {a, b});
    CHECK(e.value == doctest::Approx(expect).epsilon(1e-15));
    // cross-check against the signed contour sum
    double lhs = signed_partition_sum(dom, {a, b});
    double rhs = e.value * partition_sum(dom);
    CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("signed partition sums are positive on small blocks") {
    for (auto [m, n] : {std::pair{2, 2}, {3, 2}, {3, 3}}) {
        auto dom = DiscreteDomain::rectangle(m, n);
        for (Coord f : dom.faces()) CHECK(signed_partition_sum(dom, {f}) > 0.0);
        CHECK(signed_partition_sum(dom, {dom.faces()[0], dom.faces().back()}) > 0.0);
    }
}

TEST_CASE("correlations are invariant under domain symmetries") {
    auto dom = DiscreteDomain::rectangle(3, 3);
    // the four corner faces of the block are equivalent
    std::vector<Coord> corners;
    for (Coord f : dom.faces()) {
        int nb = 0;
        for (Coord g : face_neighbors(f)) nb += int(dom.has_face(g));
        if (nb == 2) corners.push_back(f);
    }
    REQUIRE(corners.size() == 4);
    double v0 = enumerate_correlation(dom, BoundaryCond::PlusFaces, {corners[0]}).value;
    for (Coord c : corners)
        CHECK(enumerate_correlation(dom, BoundaryCond::PlusFaces, {c}).value ==
              doctest::Approx(v0).epsilon(1e-14));
}

TEST_CASE("free boundary: odd correlators vanish, FKG ordering holds") {
    auto dom = DiscreteDomain::rectangle(3, 2);
    Coord a = dom.faces()[0];
    CHECK(std::abs(enumerate_correlation(dom, BoundaryCond::FreeFaces, {a}).value) < 1e-15);
    // FKG: free pair correlation <= plus pair correlation, all pairs, all
    // blocks up to 3x3
    for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}}) {
        auto d = DiscreteDomain::rectangle(m, n);
        for (int i = 0; i < d.face_count(); ++i)
            for (int j = i + 1; j < d.face_count(); ++j) {
                Coord f = d.faces()[i], g = d.faces()[j];
                double ef = enumerate_correlation(d, BoundaryCond::FreeFaces, {f, g}).value;
                double ep = enumerate_correlation(d, BoundaryCond::PlusFaces, {f, g}).value;
                CHECK(ef <= ep + 1e-14);
            }
    }
}

TEST_CASE("free vertex model runs on the vertex graph") {
    auto dom = DiscreteDomain::rectangle(2, 1);
    CHECK(dom.int_vertices().size() == 6);
    Coord u = dom.int_vertices()[0];
    CHECK(std::abs(enumerate_correlation(dom, BoundaryCond::FreeVertices, {u}).value) < 1e-15);
    Coord v = dom.int_vertices()[1];
    double e = enumerate_correlation(dom, BoundaryCond::FreeVertices, {u, v}).value;
    CHECK(e > 0.0);
    CHECK(e < 1.0);
}

TEST_CASE("enumeration cap is enforced") {
    auto dom = DiscreteDomain::rectangle(5, 5);
    CHECK_THROWS_AS(enumerate_correlation(dom, BoundaryCond::PlusFaces, {dom.faces()[0]}, 20),
                    TooLarge);
}

TEST_CASE("spins<->contours bijection round-trips") {
    auto dom = DiscreteDomain::rectangle(4, 4);
    // all plus -> empty contour; one minus -> the four sides of that face
    std::vector<int> spins(dom.face_count(), 1);
    CHECK(spins_to_contours(dom, spins).edges.empty());
    spins[5] = -1;
    auto c = spins_to_contours(dom, spins);
    CHECK(c.edges.size() == 4);
    CHECK(contours_to_spins(dom, c) == spins);

    std::mt19937 rng(3);
    for (int it = 0; it < 10000; ++it) {
        std::vector<int> s(dom.face_count());
        for (int& x : s) x = (rng() & 1) ? 1 : -1;
        auto cc = spins_to_contours(dom, s);
        CHECK(contours_to_spins(dom, cc) == s);
    }
    // an odd-degree edge set is rejected
    ContourConfig bad;
    bad.edges = {face_sides(dom.faces()[5])[0]};
    CHECK_THROWS_AS(contours_to_spins(dom, bad), BadBoundary);
}