#pragma once

// Full-plane spinor built from discrete harmonic measure in the slit plane.
//
// The marked face sits at a = (2, 0).  The real component F1 lives on the
// corners with a vertex to their left (a sublattice with diagonal neighbors),
// vanishes on the leftward slit row {(1 - 4j, 0)} and on the box boundary,
// and equals 1 at the tip a + 3 delta/2 = (5, 0).  The imaginary component
// comes from discrete harmonic conjugation and vanishes on the right ray.
// G integrates F1 leftward along rows and grows like Re sqrt(z - a).
//
// The infinite lattice is truncated to a box with zero boundary data; box
// doubling moves window values by well under a percent at the sizes used.

#include "spinorlab/domain.hpp"

namespace spinorlab {

struct SolverDivergenceFP : DomainError {
    SolverDivergenceFP() : DomainError("slit-plane solve failed") {}
};
struct TailNotConverged : DomainError {
    TailNotConverged() : DomainError("leftward series tail exceeds the bound") {}
};

class FullPlaneSpinor {
  public:
    // box half-width = box_delta_units * delta (at least the unit-scale
    // window plus margin)
    FullPlaneSpinor(double delta, int box_delta_units);

    static constexpr Coord marked() { return {2, 0}; }
    double delta() const { return delta_; }
    int box_units() const { return box_; }

    bool is_f1_site(Coord c) const;   // corner with its vertex to the left
    bool is_fi_site(Coord c) const;

    // canonical-sheet values anywhere in the box (both half-planes)
    double f1(Coord c) const;
    double fi(Coord c) const;         // value at the corner is i * fi
    cplx midedge(Coord m) const;      // sum of the two adjacent corner values
    double g(Coord c) const;          // leftward series, f1 sites only

    double vartheta() const { return vartheta_; }
    double nu() const { return nu_; }

    // worst Laplacian residual of g along the right ray inside the window
    double g_harmonicity_residual(int max_radius_units) const;
    // worst conjugation closure residual over the central window
    double conjugation_residual(int max_radius_units) const;

  private:
    double upper_f1(int x, int y) const;
    double upper_fi(int x, int y) const;
    int row_index_f1(int x, int y) const;
    int row_index_fi(int x, int y) const;

    double delta_;
    int box_;  // half-width in delta units
    int u_;    // half-width in lattice units (delta/2)
    std::vector<double> f1_;  // upper half, row-major, rows y = 0, 2, ...
    std::vector<double> fi_;
    std::vector<int> f1_row_start_, fi_row_start_;
    double vartheta_ = 0.0, nu_ = 0.0;
};

}  // namespace spinorlab
