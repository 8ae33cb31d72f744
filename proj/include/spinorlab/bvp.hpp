#pragma once

// Sparse least-squares solve of the discrete Riemann boundary value problem:
// s-holomorphicity at every corner except the source, the boundary condition
// Im[F sqrt(nu_out)] = 0 at the outward edges, and the two source-singularity
// projections.  Unknowns are the complex midedge values on the reference
// sheet; corner values follow by projection.

#include <iosfwd>

#include "spinorlab/domain.hpp"

namespace spinorlab {

struct SolverDivergence : DomainError { using DomainError::DomainError; };
struct ResidualTooLarge : DomainError { using DomainError::DomainError; };

class CoverField {
  public:
    CoverField(const DiscreteDomain& dom, MarkedConfig cfg, std::vector<cplx> midedge_values,
               double residual, int rank_defect)
        : dom_(&dom), cfg_(std::move(cfg)), med_(std::move(midedge_values)),
          residual_(residual), rank_defect_(rank_defect) {}

    cplx midedge_value(Coord z) const;         // reference sheet
    cplx corner_value(Coord c) const;          // projection of an adjacent midedge
    cplx value(Coord z) const;                 // either of the above
    cplx on_source_sheet(Coord z) const;       // sign-corrected toward the source

    double residual() const { return residual_; }
    int rank_defect() const { return rank_defect_; }
    const DiscreteDomain& domain() const { return *dom_; }
    const MarkedConfig& config() const { return cfg_; }

    // Largest mismatch between the two corner projections, over all corners.
    double corner_consistency_gap() const;

  private:
    const DiscreteDomain* dom_;
    MarkedConfig cfg_;
    std::vector<cplx> med_;
    double residual_;
    int rank_defect_;
};

struct SolveOptions {
    double residual_tol = 1e-10;
    double rhs_perturbation = 0.0;        // seeded noise on b, for stability checks
    std::ostream* dump_system = nullptr;  // triplet dump of (A, b) when set
};

CoverField solve_observable(const DiscreteDomain& dom, const MarkedConfig& cfg,
                            const SolveOptions& opts = {});

struct ObservableRatios {
    double horizontal;   // F(a+3d/2) on the source sheet, real
    cplx diag_plus;      // e^{+i pi/4} F(a+(1+i/2)d), source sheet
    cplx diag_minus;
    cplx branch_value;   // F(b+d/2), reference sheet (k = 1 only, else 0)
};

ObservableRatios observable_ratios(const CoverField& field);

}  // namespace spinorlab
