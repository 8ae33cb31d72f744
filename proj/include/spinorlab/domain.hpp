#pragma once

// Discrete domains: a union of faces of the rotated grid together with the
// derived vertex / edge / corner sets and boundary data needed by the
// contour and boundary-value machinery.

#include <array>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spinorlab/geometry.hpp"

namespace spinorlab {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyDomain : DomainError { EmptyDomain() : DomainError("empty domain") {} };
struct Disconnected : DomainError { Disconnected() : DomainError("faces not edge-connected") {} };
struct NotSimplyConnected : DomainError {
    NotSimplyConnected() : DomainError("domain has a hole") {}
};
struct FiordViolation : DomainError {
    FiordViolation() : DomainError("single-face-wide fiord") {}
};
struct AmbiguousNormal : DomainError {
    AmbiguousNormal() : DomainError("outer normal direction is ambiguous") {}
};
struct InvalidSite : DomainError { using DomainError::DomainError; };
struct FormatError : DomainError { using DomainError::DomainError; };

// Edge classes.  Interior and boundary midedges are sides of interior faces
// and carry the contour configurations; outer midedges are the edges sticking
// out of the domain from an interior vertex.  The Riemann boundary condition
// Im[F(z) sqrt(nu_out(z))] = 0 holds at the outer midedges, with nu_out the
// unit vector from the inner endpoint toward the outer one.
enum class MidedgeClass { Interior, Boundary, Outer };

struct MidedgeInfo {
    Coord pos;
    MidedgeClass cls;
    Coord v1, v2;       // endpoints; for Outer, v1 is the inner endpoint
    int f1 = -1, f2 = -1;  // interior face indices flanking the edge (-1 = none)
};

struct CornerInfo {
    Coord pos;
    CornerType tau;
    Coord vertex;
    int med[2];  // indices into midedges() of the two adjacent midedges
};

struct BoundaryNormal {
    Coord midedge;
    cplx direction;  // unit modulus, one of exp(+-i pi/4), exp(+-3i pi/4)
};

class DiscreteDomain {
  public:
    static DiscreteDomain build(std::vector<Coord> faces);
    static DiscreteDomain disc(double radius, double delta);
    static DiscreteDomain rectangle(int m, int n);

    int face_count() const { return int(faces_.size()); }
    const std::vector<Coord>& faces() const { return faces_; }
    const std::vector<Coord>& boundary_faces() const { return boundary_faces_; }
    const std::vector<Coord>& int_vertices() const { return int_vertices_; }
    const std::vector<Coord>& boundary_vertices() const { return boundary_vertices_; }
    const std::vector<MidedgeInfo>& midedges() const { return midedges_; }
    const std::vector<CornerInfo>& corners() const { return corners_; }

    bool has_face(Coord f) const { return face_index_.count(f) != 0; }
    bool has_int_vertex(Coord v) const { return vertex_index_.count(v) != 0; }
    int face_index(Coord f) const;
    int vertex_index(Coord v) const;
    int midedge_index(Coord m) const;  // -1 if not present
    int corner_index(Coord c) const;   // -1 if not present

    // Sides of interior faces only (Interior + Boundary classes); these are
    // the edges contour configurations may use.  They are a prefix of
    // midedges(), so a side-edge index is also a midedge index.
    int side_edge_count() const { return n_side_edges_; }

    // Exterior neighbor count of an interior face (sides facing non-interior
    // faces); these are the bonds to the frozen plus boundary.
    int exterior_sides(int face_idx) const { return ext_sides_[face_idx]; }
    // Interior face index across side s of face f, or -1.
    int face_neighbor(int face_idx, int side) const { return face_nbr_[face_idx][side]; }

    BoundaryNormal outer_normal(Coord midedge) const;

    // Vertex graph: interior vertices joined by the side edges.  Used by the
    // dual spin model with free boundary and by reference-path searches.
    const std::vector<std::array<int, 4>>& vertex_adj() const { return vertex_adj_; }
    // midedge index of the edge between adjacent interior vertices, or -1.
    int edge_between(Coord u, Coord v) const;

    void serialize(std::ostream& os, double delta) const;
    static std::pair<DiscreteDomain, double> deserialize(std::istream& is);

  private:
    std::vector<Coord> faces_;
    std::vector<Coord> boundary_faces_;
    std::vector<Coord> int_vertices_;
    std::vector<Coord> boundary_vertices_;
    std::vector<MidedgeInfo> midedges_;
    std::vector<CornerInfo> corners_;
    std::unordered_map<Coord, int, CoordHash> face_index_;
    std::unordered_map<Coord, int, CoordHash> vertex_index_;
    std::unordered_map<Coord, int, CoordHash> midedge_index_;
    std::unordered_map<Coord, int, CoordHash> corner_index_;
    std::vector<std::array<int, 4>> face_nbr_;
    std::vector<int> ext_sides_;
    std::vector<std::array<int, 4>> vertex_adj_;
    int n_side_edges_ = 0;
};

// Marked faces: the source face a and the branch faces a_1..a_k.  Each marked
// face carries a horizontal branch cut just below its row, extending to the
// left; crossing parities of lattice paths against these cuts implement the
// double cover bookkeeping.
struct MarkedConfig {
    Coord a;
    std::vector<Coord> branches;

    MarkedConfig() = default;
    MarkedConfig(Coord a_, std::vector<Coord> br = {}) : a(a_), branches(std::move(br)) {}

    int total_marked() const { return 1 + int(branches.size()); }
    Coord marked(int j) const { return j == 0 ? a : branches[j - 1]; }

    void validate(const DiscreteDomain& dom) const;

    // +1 / -1 according to the parity of cut crossings along the polyline.
    int crossing_parity(const std::vector<Coord>& path) const;
    // Parity of a single segment against all cuts.
    int segment_parity(Coord p, Coord q) const;
    // Parity of a single segment against one marked face's cut.
    static bool segment_crosses(Coord p, Coord q, Coord marked_face) {
        return segment_crosses_cut(p, q, marked_face);
    }
};

struct NonAdjacentStep : DomainError {
    NonAdjacentStep() : DomainError("path step is not between adjacent lattice objects") {}
};

}  // namespace spinorlab
