#pragma once

// The discrete primitive of Re[F^2 dz]: a real function on faces and
// vertices with H(face) - H(vertex) = 2 delta |F(corner)|^2 across each
// face/vertex pair, zero on the boundary, subharmonic on interior faces away
// from the marked points and superharmonic on interior vertices away from
// a + delta (with reduced conductance on boundary bonds).

#include <functional>

#include "spinorlab/domain.hpp"

namespace spinorlab {

struct InconsistentField : DomainError { using DomainError::DomainError; };

struct HField {
    // indexed by dom.faces() then dom.boundary_faces()
    std::vector<double> face_h;
    // indexed by dom.int_vertices(); boundary vertices carry 0
    std::vector<double> vertex_h;
    double closure_residual = 0.0;   // worst increment-law violation
    double boundary_residual = 0.0;  // worst |H| over boundary faces

    double face(const DiscreteDomain& dom, Coord f) const;
    double vertex(const DiscreteDomain& dom, Coord v) const;
};

// corner_abs2(c) must return |F(c)|^2 for every corner of the domain; the
// source corner a + delta/2 is ignored and |F| = 1 is used there.
HField integrate_H(const DiscreteDomain& dom, const MarkedConfig& cfg, double delta,
                   const std::function<double(Coord)>& corner_abs2,
                   double tol = 1e-10);

struct LaplacianReport {
    std::vector<Coord> face_violations;    // interior faces with a negative Laplacian
    std::vector<Coord> vertex_violations;  // interior vertices with a positive one
    std::vector<Coord> normal_violations;  // positive H next to the boundary
    double worst_face = 0.0;
    double worst_vertex = 0.0;
    bool clean() const {
        return face_violations.empty() && vertex_violations.empty() &&
               normal_violations.empty();
    }
};

LaplacianReport laplacian_report(const HField& h, const DiscreteDomain& dom,
                                 const MarkedConfig& cfg, double tol = 1e-9);

}  // namespace spinorlab
