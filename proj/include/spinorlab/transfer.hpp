#pragma once

// Exact correlations on rectangular face blocks by a column-to-column
// transfer sweep in contour weights.  Handles widths beyond the enumeration
// cap; agrees with enumeration wherever both run.

#include "spinorlab/ising.hpp"

namespace spinorlab {

struct TooWide : DomainError {
    TooWide() : DomainError("transfer width exceeds the cap") {}
};

inline constexpr int kTransferWidthCap = 20;

// Marked sites use the coordinates of DiscreteDomain::rectangle(m, n):
// faces for the face models, interior vertices for FreeVertices.
Estimate transfer_matrix_correlation(int m, int n, BoundaryCond bc,
                                     const std::vector<Coord>& marked);

}  // namespace spinorlab
