#pragma once

// Exact cross-checks between the enumeration observable and the exact spin
// engines: the horizontal / dual / diagonal ratio identities, plus the
// s-holomorphicity, boundary and source-singularity relations.  All residuals
// vanish to rounding for every valid domain and marking.

#include "spinorlab/observable.hpp"

namespace spinorlab {

struct RatioResiduals {
    double horizontal = 0.0;  // F(a+3d/2) vs E+[s_{a+2d} ...]/E+[s_a ...]
    double dual = -1.0;       // |F(b+d/2)| vs Efree_vertex ratio (k = 1 only)
    double diag_plus = 0.0;   // e^{+i pi/4} F(a+(1+i/2)d) vs diagonal ratio
    double diag_minus = 0.0;
};

struct FieldResiduals {
    double shol = 0.0;         // corner = projected midedge value, whole cover
    double boundary = 0.0;     // Im[F sqrt(nu_out)] on outer midedges
    double singularity = 0.0;  // P_{iR}[F(a+(1+-i)d/2)] = -+i on the source sheet
    int checks = 0;
};

// Sign relating the reference-sheet value at z to the value on the source
// sheet, determined by the straight segment from the source corner.
int source_sheet_sign(const MarkedConfig& cfg, Coord z);

RatioResiduals check_ratio_identities(const DiscreteDomain& dom, const MarkedConfig& cfg,
                                      int cap = kEnumerationCap);
FieldResiduals check_field_relations(const ObservableEnum& obs, const DiscreteDomain& dom);

}  // namespace spinorlab
