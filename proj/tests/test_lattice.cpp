#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "spinorlab/domain.hpp"
#include "spinorlab/suite.hpp"

using namespace spinorlab;

TEST_CASE("point classification is a partition with the expected anchors") {
    CHECK(classify_point({0, 0}) == PointKind::Vertex);
    CHECK(classify_point({2, 0}) == PointKind::Face);   // (x+y)/2 odd
    CHECK(classify_point({1, 1}) == PointKind::Midedge);
    CHECK(classify_point({5, 0}) == PointKind::Corner);
    CHECK(corner_type({5, 0}) == CornerType::One);
    CHECK(corner_vertex({5, 0}) == Coord{4, 0});
    CHECK(corner_type({3, 0}) == CornerType::I);  // vertex (4,0) to the right
    CHECK(corner_type({2, 1}) == CornerType::Lambda);
    CHECK(corner_type({2, -1}) == CornerType::LambdaBar);

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-40, 40);
    for (int i = 0; i < 2000; ++i) {
        Coord p{d(rng), d(rng)};
        int n = 0;
        PointKind k = classify_point(p);
        for (PointKind q : {PointKind::Vertex, PointKind::Face, PointKind::Midedge,
                            PointKind::Corner})
            n += int(k == q);
        CHECK(n == 1);
        // invariance under translation by a vertex-lattice vector
        Coord t{p.x + 2, p.y + 2};
        CHECK(classify_point(t) == k);
        Coord t2{p.x + 4, p.y};
        CHECK(classify_point(t2) == k);
    }
}

TEST_CASE("corner adjacency tables are symmetric and at fixed distances") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-20, 20);
    int found = 0;
    while (found < 500) {
        Coord p{d(rng), d(rng)};
        if (!is_corner(p)) continue;
        ++found;
        Coord v = corner_vertex(p);
        CHECK(is_vertex(v));
        int dx = p.x - v.x, dy = p.y - v.y;
        CHECK(dx * dx + dy * dy == 1);  // |corner - vertex| = delta/2
        bool corner_listed = false;
        for (Coord c : vertex_corners(v)) corner_listed |= (c == p);
        CHECK(corner_listed);
        auto [m1, m2] = corner_midedges(p);
        for (Coord m : {m1, m2}) {
            CHECK(is_midedge(m));
            int ex = p.x - m.x, ey = p.y - m.y;
            CHECK(ex * ex + ey * ey == 1);  // |corner - midedge| = delta/2
            auto [va, vb] = midedge_vertices(m);
            CHECK((va == v || vb == v));
        }
    }
}

TEST_CASE("single-face domain counts") {
    auto dom = DiscreteDomain::build({{2, 0}});
    CHECK(dom.face_count() == 1);
    CHECK(dom.int_vertices().size() == 4);
    CHECK(dom.boundary_faces().size() == 4);
    int n_int = 0, n_bdry = 0, n_outer = 0;
    for (const auto& me : dom.midedges()) {
        n_int += me.cls == MidedgeClass::Interior;
        n_bdry += me.cls == MidedgeClass::Boundary;
        n_outer += me.cls == MidedgeClass::Outer;
    }
    CHECK(n_int == 0);
    CHECK(n_bdry == 4);   // the face's own sides
    CHECK(n_outer == 8);  // two outward edges per vertex
    CHECK(dom.corners().size() == 16);
}

TEST_CASE("edge-sharing domino counts") {
    auto dom = DiscreteDomain::rectangle(2, 1);
    CHECK(dom.face_count() == 2);
    CHECK(dom.int_vertices().size() == 6);
    int n_int = 0, n_bdry = 0;
    for (const auto& me : dom.midedges()) {
        n_int += me.cls == MidedgeClass::Interior;
        n_bdry += me.cls == MidedgeClass::Boundary;
    }
    CHECK(n_int == 1);  // the shared side
    CHECK(n_bdry == 6);
}

TEST_CASE("invalid domains are rejected") {
    CHECK_THROWS_AS(DiscreteDomain::build({}), EmptyDomain);
    // faces sharing only a vertex are not edge-connected
    CHECK_THROWS_AS(DiscreteDomain::build({{2, 0}, {6, 0}}), Disconnected);
    // 3x3 block minus its center has a hole
    {
        auto block = DiscreteDomain::rectangle(3, 3);
        std::vector<Coord> faces;
        Coord center = block.faces()[4];
        for (Coord f : block.faces())
            if (!(f == center)) faces.push_back(f);
        // find the actual center: face with 4 interior neighbors
        for (Coord f : block.faces()) {
            int nb = 0;
            for (Coord g : face_neighbors(f)) nb += int(block.has_face(g));
            if (nb == 4) center = f;
        }
        faces.clear();
        for (Coord f : block.faces())
            if (!(f == center)) faces.push_back(f);
        CHECK_THROWS_AS(DiscreteDomain::build(faces), NotSimplyConnected);
    }
    // 3x4 block minus two faces of a middle column leaves a one-wide fiord
    {
        auto block = DiscreteDomain::rectangle(3, 4);
        // remove the two middle-column faces adjacent to one long side
        std::vector<Coord> faces = block.faces();
        std::vector<Coord> removed;
        for (Coord f : faces) {
            int nb = 0;
            for (Coord g : face_neighbors(f)) nb += int(block.has_face(g));
            if (nb == 4 && removed.size() < 1) removed.push_back(f);
        }
        REQUIRE(removed.size() == 1);
        // also remove its boundary-side neighbor to cut a channel
        Coord inner = removed[0];
        Coord outer_nb{-1000, -1000};
        for (Coord g : face_neighbors(inner)) {
            if (!block.has_face(g)) continue;
            int nb = 0;
            for (Coord h : face_neighbors(g)) nb += int(block.has_face(h));
            if (nb < 4) outer_nb = g;
        }
        REQUIRE(block.has_face(outer_nb));
        std::vector<Coord> cut;
        for (Coord f : faces)
            if (!(f == inner) && !(f == outer_nb)) cut.push_back(f);
        CHECK_THROWS_AS(DiscreteDomain::build(cut), FiordViolation);
    }
}

TEST_CASE("outer normals are unit outward diagonals") {
    auto dom = DiscreteDomain::build({{2, 0}});
    int checked = 0;
    for (const auto& me : dom.midedges()) {
        if (me.cls != MidedgeClass::Outer) continue;
        auto n = dom.outer_normal(me.pos);
        CHECK(std::abs(std::abs(n.direction) - 1.0) < 1e-15);
        // outward: positive radial component seen from the face center
        cplx rad = to_complex(me.pos, 1.0) - to_complex({2, 0}, 1.0);
        CHECK(std::real(rad * std::conj(n.direction)) > 0);
        ++checked;
    }
    CHECK(checked == 8);
    // the two outward edges at the east vertex
    CHECK(dom.outer_normal({5, 1}).direction == cplx{M_SQRT1_2, M_SQRT1_2});
    CHECK(dom.outer_normal({5, -1}).direction == cplx{M_SQRT1_2, -M_SQRT1_2});
}

TEST_CASE("normals along a straight boundary run alternate") {
    auto dom = DiscreteDomain::rectangle(5, 5);
    // top-most vertices: normals of their outward edges point up-left/up-right
    int ymax = -1000;
    for (Coord v : dom.int_vertices()) ymax = std::max(ymax, v.y);
    int seen_ne = 0, seen_nw = 0;
    for (const auto& me : dom.midedges()) {
        if (me.cls != MidedgeClass::Outer) continue;
        if (me.v1.y != ymax) continue;
        auto n = dom.outer_normal(me.pos);
        if (std::imag(n.direction) < 0) continue;
        seen_ne += std::real(n.direction) > 0;
        seen_nw += std::real(n.direction) < 0;
    }
    CHECK(seen_ne > 0);
    CHECK(seen_nw > 0);
    CHECK(seen_ne == seen_nw);
}

TEST_CASE("crossing parity: anchors and multiplicativity") {
    MarkedConfig cfg({2, 0});
    // path entirely right of the cut
    CHECK(cfg.crossing_parity({{5, 0}, {4, 1}, {5, 2}}) == 1);
    // smallest lattice loop around the marked face
    std::vector<Coord> loop{{0, 0}, {2, 2}, {4, 0}, {2, -2}, {0, 0}};
    CHECK(cfg.crossing_parity(loop) == -1);
    std::vector<Coord> twice = loop;
    twice.insert(twice.end(), loop.begin() + 1, loop.end());
    CHECK(cfg.crossing_parity(twice) == 1);
    // multiplicative under concatenation
    std::vector<Coord> p1{{4, 0}, {2, -2}, {0, 0}};
    std::vector<Coord> p2{{0, 0}, {2, 2}, {4, 0}};
    CHECK(cfg.crossing_parity(p1) * cfg.crossing_parity(p2) ==
          cfg.crossing_parity(loop) * 1);
    // contractible loop avoiding the marked face
    std::vector<Coord> far{{6, 2}, {8, 4}, {10, 2}, {8, 0}, {6, 2}};
    CHECK(cfg.crossing_parity(far) == 1);
    CHECK_THROWS_AS(cfg.crossing_parity({{0, 0}, {8, 8}}), NonAdjacentStep);
}

TEST_CASE("standard domains") {
    auto domino = DiscreteDomain::rectangle(2, 1);
    CHECK(domino.face_count() == 2);
    CHECK(DiscreteDomain::rectangle(1, 1).face_count() == 1);

    double delta = 1.0 / 8.0;
    auto disc = DiscreteDomain::disc(1.0, delta);
    double expected = M_PI / (2.0 * delta * delta);
    CHECK(std::abs(disc.face_count() - expected) < 0.05 * expected);
}

TEST_CASE("domain serialization round-trips") {
    auto dom = DiscreteDomain::rectangle(3, 2);
    std::stringstream ss;
    dom.serialize(ss, 1.0 / 16.0);
    auto [back, delta] = DiscreteDomain::deserialize(ss);
    CHECK(delta == 1.0 / 16.0);
    CHECK(back.faces() == dom.faces());
    std::stringstream bad("format=wrong v9\n0 0\n");
    CHECK_THROWS_AS(DiscreteDomain::deserialize(bad), FormatError);
}

TEST_CASE("every suite domain builds") {
    for (const auto& faces : polyomino_face_sets(6)) CHECK_NOTHROW(DiscreteDomain::build(faces));
    int sizes = 0;
    for (const auto& faces : curated_large_face_sets()) {
        CHECK_NOTHROW(DiscreteDomain::build(faces));
        sizes += int(faces.size());
    }
    CHECK(sizes >= 9 + 10 + 12 + 11 + 12);
}
