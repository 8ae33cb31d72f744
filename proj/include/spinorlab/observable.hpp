#pragma once

// The combinatorial spinor observable, computed literally as a sum over
// defect contour configurations: closed contours XOR a reference path from
// the source corner a + delta/2 to a target corner or midedge z.  Each
// configuration contributes
//
//   alpha_c^{#full edges} * exp(-i/2 * wind(path)) * (-1)^{#odd loops} * sheet
//
// where the path/loop decomposition pairs the passages at each vertex by a
// deterministic non-crossing rule, "odd" loops enclose an odd number of
// marked faces, and the sheet sign is the cut-crossing parity of the path.
// Midedge values carry the extra factor 1/cos(pi/8).
//
// Values are reported on the reference sheet of the double cover (the lift
// reached by paths with even cut-crossing parity); the other lift is the
// negative.

#include <vector>

#include "spinorlab/ising.hpp"

namespace spinorlab {

struct SourceCorner : DomainError {
    SourceCorner() : DomainError("observable is undefined at the source corner") {}
};
struct NotADefectConfig : DomainError { using DomainError::DomainError; };

// Which of the two non-crossing pairings of sorted passage directions is used
// at every vertex.  The phase is independent of this choice; tests flip it.
enum class PairingRule { AdjacentLow, AdjacentHigh };

struct DefectPhase {
    int wind45 = 0;      // total turning of the path in 45-degree units
    int sheet_sign = 1;  // cut-crossing parity of the path
    int odd_loops = 0;   // number of loops enclosing an odd number of marked faces
    int n_edges = 0;     // full edges in the configuration
    cplx phase() const;  // exp(-i pi wind45 / 8) * sheet * (-1)^odd_loops
};

struct Decomposition {
    DefectPhase phase;
    std::vector<Coord> path;                // corner/vertex/... polyline, source to target
    std::vector<std::vector<Coord>> loops;  // closed vertex polylines
};

class ObservableEnum {
  public:
    ObservableEnum(const DiscreteDomain& dom, MarkedConfig cfg, int cap = kEnumerationCap,
                   PairingRule rule = PairingRule::AdjacentLow);

    // Reference-sheet value at a corner of the cover or a midedge.
    cplx value(Coord z) const;
    cplx value_other_sheet(Coord z) const { return -value(z); }

    double normalization() const { return z_signed_; }  // Z^+[sigma_a sigma_a1 ...]
    const MarkedConfig& config() const { return cfg_; }

    // Decomposition of a single defect configuration gamma (full side edges)
    // with target z, mostly for tests of the pairing-rule independence.
    Decomposition decompose(const std::vector<Coord>& gamma_edges, Coord z,
                            PairingRule rule) const;

  private:
    const DiscreteDomain& dom_;
    MarkedConfig cfg_;
    SpinGraph graph_;
    double z_signed_;
    int cap_;
    PairingRule rule_;
};

// Convenience wrapper for one-off values.
cplx observable_enum(const DiscreteDomain& dom, const MarkedConfig& cfg, Coord z,
                     int cap = kEnumerationCap);

}  // namespace spinorlab
