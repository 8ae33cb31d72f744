#pragma once

// Integer geometry of the 45-degree rotated square grid.
//
// All coordinates are integers in units of delta/2, where delta is the mesh
// size (half-diagonal of a lattice face).  With this convention every object
// of interest is an exact integer point:
//   vertex   : x, y even and (x+y)/2 even
//   face     : x, y even and (x+y)/2 odd
//   midedge  : x, y odd              (midpoint of an edge between vertices)
//   corner   : exactly one of x, y odd (quarter point next to a vertex)

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinorlab {

using cplx = std::complex<double>;

struct Coord {
    int x = 0;
    int y = 0;

    friend bool operator==(const Coord& a, const Coord& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Coord& a, const Coord& b) { return !(a == b); }
    friend bool operator<(const Coord& a, const Coord& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
    Coord operator+(const Coord& o) const { return {x + o.x, y + o.y}; }
    Coord operator-(const Coord& o) const { return {x - o.x, y - o.y}; }
};

struct CoordHash {
    size_t operator()(const Coord& c) const {
        uint64_t k = (uint64_t(uint32_t(c.x)) << 32) | uint32_t(c.y);
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        k *= 0xc4ceb9fe1a85ec53ULL;
        k ^= k >> 33;
        return size_t(k);
    }
};

enum class PointKind { Vertex, Face, Midedge, Corner };

// Corner type tau: fixed by the direction from the corner to its unique
// adjacent vertex.  Spinor values at a corner lie on the line tau*R.
//   vertex to the left  -> tau = 1
//   vertex above        -> tau = exp(i pi/4)
//   vertex to the right -> tau = i
//   vertex below        -> tau = exp(-i pi/4)
enum class CornerType { One, Lambda, I, LambdaBar };

inline bool is_even(int v) { return (v & 1) == 0; }

inline PointKind classify_point(Coord p) {
    bool ex = is_even(p.x), ey = is_even(p.y);
    if (ex && ey) return is_even((p.x + p.y) / 2) ? PointKind::Vertex : PointKind::Face;
    if (!ex && !ey) return PointKind::Midedge;
    return PointKind::Corner;
}

inline bool is_vertex(Coord p) { return classify_point(p) == PointKind::Vertex; }
inline bool is_face(Coord p) { return classify_point(p) == PointKind::Face; }
inline bool is_midedge(Coord p) { return classify_point(p) == PointKind::Midedge; }
inline bool is_corner(Coord p) { return classify_point(p) == PointKind::Corner; }

// Unique vertex at distance delta/2 from a corner.
inline Coord corner_vertex(Coord c) {
    if (!is_even(c.x)) {
        Coord left{c.x - 1, c.y};
        return is_vertex(left) ? left : Coord{c.x + 1, c.y};
    }
    Coord below{c.x, c.y - 1};
    return is_vertex(below) ? below : Coord{c.x, c.y + 1};
}

inline CornerType corner_type(Coord c) {
    Coord v = corner_vertex(c);
    if (v.x < c.x) return CornerType::One;
    if (v.x > c.x) return CornerType::I;
    return v.y > c.y ? CornerType::Lambda : CornerType::LambdaBar;
}

// tau as a unit complex number.
inline cplx corner_tau(CornerType t) {
    const double r = 0.7071067811865475244;  // 1/sqrt(2)
    switch (t) {
        case CornerType::One: return {1.0, 0.0};
        case CornerType::Lambda: return {r, r};
        case CornerType::I: return {0.0, 1.0};
        default: return {r, -r};
    }
}

// Projection of w onto the line tau*R:  P[w] = (w + tau^2 conj(w)) / 2.
inline cplx project_line(CornerType t, cplx w) {
    cplx tau = corner_tau(t);
    return 0.5 * (w + tau * tau * std::conj(w));
}

// The two midedges adjacent to a corner (distance delta/2).
inline std::pair<Coord, Coord> corner_midedges(Coord c) {
    if (!is_even(c.x)) return {Coord{c.x, c.y + 1}, Coord{c.x, c.y - 1}};
    return {Coord{c.x + 1, c.y}, Coord{c.x - 1, c.y}};
}

// Endpoints (vertices) of the edge with midpoint m.
inline std::pair<Coord, Coord> midedge_vertices(Coord m) {
    Coord ne{m.x + 1, m.y + 1}, sw{m.x - 1, m.y - 1};
    if (is_vertex(ne)) return {sw, ne};
    return {Coord{m.x - 1, m.y + 1}, Coord{m.x + 1, m.y - 1}};
}

// The two faces flanking the edge with midpoint m.
inline std::pair<Coord, Coord> midedge_faces(Coord m) {
    Coord ne{m.x + 1, m.y + 1};
    if (is_vertex(ne)) return {Coord{m.x - 1, m.y + 1}, Coord{m.x + 1, m.y - 1}};
    return {Coord{m.x - 1, m.y - 1}, ne};
}

// Faces sharing an edge with face f.
inline std::array<Coord, 4> face_neighbors(Coord f) {
    return {Coord{f.x + 2, f.y + 2}, Coord{f.x - 2, f.y + 2}, Coord{f.x - 2, f.y - 2},
            Coord{f.x + 2, f.y - 2}};
}

// Midpoints of the four sides of face f.
inline std::array<Coord, 4> face_sides(Coord f) {
    return {Coord{f.x + 1, f.y + 1}, Coord{f.x - 1, f.y + 1}, Coord{f.x - 1, f.y - 1},
            Coord{f.x + 1, f.y - 1}};
}

// The four vertices of face f.
inline std::array<Coord, 4> face_vertices(Coord f) {
    return {Coord{f.x + 2, f.y}, Coord{f.x, f.y + 2}, Coord{f.x - 2, f.y}, Coord{f.x, f.y - 2}};
}

// Vertices adjacent to vertex v through a lattice edge.
inline std::array<Coord, 4> vertex_neighbors(Coord v) {
    return {Coord{v.x + 2, v.y + 2}, Coord{v.x - 2, v.y + 2}, Coord{v.x - 2, v.y - 2},
            Coord{v.x + 2, v.y - 2}};
};

// The four corners around vertex v.
inline std::array<Coord, 4> vertex_corners(Coord v) {
    return {Coord{v.x + 1, v.y}, Coord{v.x, v.y + 1}, Coord{v.x - 1, v.y}, Coord{v.x, v.y - 1}};
}

// Faces incident to vertex v.
inline std::array<Coord, 4> vertex_faces(Coord v) {
    return {Coord{v.x + 2, v.y}, Coord{v.x, v.y + 2}, Coord{v.x - 2, v.y}, Coord{v.x, v.y - 2}};
}

// Physical position for mesh size delta.
inline cplx to_complex(Coord p, double delta) { return {p.x * delta / 2.0, p.y * delta / 2.0}; }

// Direction octants, 45-degree steps counterclockwise from east.
// Axis-parallel steps (corner stubs) use even octants, diagonal lattice
// edges use odd octants.
inline int dir_octant(Coord from, Coord to) {
    int dx = to.x - from.x, dy = to.y - from.y;
    if (dx > 0 && dy == 0) return 0;
    if (dx > 0 && dy > 0) return 1;
    if (dx == 0 && dy > 0) return 2;
    if (dx < 0 && dy > 0) return 3;
    if (dx < 0 && dy == 0) return 4;
    if (dx < 0 && dy < 0) return 5;
    if (dx == 0 && dy < 0) return 6;
    if (dx > 0 && dy < 0) return 7;
    throw std::logic_error("dir_octant: zero step");
}

// Signed turn in 45-degree units, in (-4, 4].
inline int turn_octants(int dir_in, int dir_out) {
    int d = (dir_out - dir_in) % 8;
    if (d > 4) d -= 8;
    if (d <= -4) d += 8;
    return d;
}

// Does the open segment p -> q cross the branch cut of the face at m?
// The cut is the horizontal ray { y = m.y - eps, x < m.x } with eps an
// infinitesimal positive offset, so no lattice point lies on it.
inline bool segment_crosses_cut(Coord p, Coord q, Coord m) {
    bool p_above = p.y >= m.y, q_above = q.y >= m.y;
    if (p_above == q_above) return false;
    // x-coordinate where the segment meets the line y = m.y - eps, to first
    // order in eps: x0 - eps*(dx/dy).  Compare against m.x exactly.
    int64_t dy = q.y - p.y, dx = q.x - p.x;
    int64_t num = int64_t(p.x) * dy + dx * int64_t(m.y - p.y);  // x0 * dy
    int64_t rhs = int64_t(m.x) * dy;
    if (dy < 0) { num = -num; rhs = -rhs; dy = -dy; dx = -dx; }
    if (num != rhs) return num < rhs;
    return dx > 0;  // tie broken by the eps term: crossing iff dx/dy > 0
}

}  // namespace spinorlab
