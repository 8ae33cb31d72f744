#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spinorlab/transfer.hpp"

using namespace spinorlab;

TEST_CASE("transfer sweep equals enumeration on small blocks") {
    // single face magnetization
    {
        auto dom = DiscreteDomain::rectangle(1, 1);
        Coord a = dom.faces()[0];
        CHECK(transfer_matrix_correlation(1, 1, BoundaryCond::PlusFaces, {a}).value ==
              doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-13));
    }
    // domino pair
    {
        auto dom = DiscreteDomain::rectangle(2, 1);
        auto tm = transfer_matrix_correlation(2, 1, BoundaryCond::PlusFaces,
                                              {dom.faces()[0], dom.faces()[1]});
        auto en = enumerate_correlation(dom, BoundaryCond::PlusFaces,
                                        {dom.faces()[0], dom.faces()[1]});
        CHECK(tm.value == doctest::Approx(en.value).epsilon(1e-13));
    }
    // every bc on blocks where both engines run
    for (auto [m, n] : {std::pair{3, 2}, {4, 4}, {2, 5}}) {
        auto dom = DiscreteDomain::rectangle(m, n);
        Coord f0 = dom.faces()[0];
        Coord fc = dom.faces()[dom.face_count() / 2];
        for (BoundaryCond bc : {BoundaryCond::PlusFaces, BoundaryCond::FreeFaces}) {
            double tm = transfer_matrix_correlation(m, n, bc, {f0, fc}).value;
            double en = enumerate_correlation(dom, bc, {f0, fc}).value;
            CHECK(std::abs(tm - en) < 1e-12);
        }
        if (int(dom.int_vertices().size()) <= kEnumerationCap) {
            Coord v0 = dom.int_vertices()[1];
            Coord v1 = dom.int_vertices()[dom.int_vertices().size() - 2];
            double tmv =
                transfer_matrix_correlation(m, n, BoundaryCond::FreeVertices, {v0, v1}).value;
            double env = enumerate_correlation(dom, BoundaryCond::FreeVertices, {v0, v1}).value;
            CHECK(std::abs(tmv - env) < 1e-12);
        }
    }
}

TEST_CASE("transfer handles widths beyond the enumeration cap") {
    // 4x4 center spin, frozen value from the enumeration engine
    auto dom = DiscreteDomain::rectangle(4, 4);
    Coord c = dom.faces()[5];
    double en = enumerate_correlation(dom, BoundaryCond::PlusFaces, {c}).value;
    double tm = transfer_matrix_correlation(4, 4, BoundaryCond::PlusFaces, {c}).value;
    CHECK(std::abs(tm - en) < 1e-12);

    // long strip: transpose path, still exact and in (0, 1)
    auto strip = DiscreteDomain::rectangle(40, 2);
    Coord mid = strip.faces()[40];
    double v = transfer_matrix_correlation(40, 2, BoundaryCond::PlusFaces, {mid}).value;
    CHECK(v > 0.0);
    CHECK(v < 1.0);

    CHECK_THROWS_AS(transfer_matrix_correlation(21, 21, BoundaryCond::PlusFaces, {}), TooWide);
    auto rect = DiscreteDomain::rectangle(3, 3);
    CHECK_THROWS_AS(
        transfer_matrix_correlation(3, 3, BoundaryCond::PlusFaces, {Coord{100, 100}}),
        InvalidSite);
}

TEST_CASE("plus magnetization decays with distance from the boundary") {
    double edge = transfer_matrix_correlation(9, 9, BoundaryCond::PlusFaces,
                                              {DiscreteDomain::rectangle(9, 9).faces()[0]})
                      .value;
    auto dom = DiscreteDomain::rectangle(9, 9);
    Coord center = dom.faces()[dom.face_count() / 2];
    double mid = transfer_matrix_correlation(9, 9, BoundaryCond::PlusFaces, {center}).value;
    CHECK(mid < edge);
    CHECK(mid > 0.0);
}