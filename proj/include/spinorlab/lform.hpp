#pragma once

// The log-correlation differential form: moving one point of a configuration
// along an axis-parallel segment changes log <prod sigma> by the integral of
// Re[A da] (dx legs) or -Im[A dy] (dy legs).  The form is exact; integrating
// it from an imaginary-axis anchor (where the sign-sum formula is exact)
// reconstructs correlation values for any number of points.

#include <vector>

#include "spinorlab/continuum.hpp"

namespace spinorlab {

struct PathHitsCollision : ContinuumError {
    PathHitsCollision() : ContinuumError("configuration path passes through a collision") {}
};

// One leg: point `moving` travels from its position in `points` to `target`,
// which must differ in exactly one of the two real coordinates.
struct ConfigLeg {
    std::vector<cplx> points;
    int moving = 0;
    cplx target;
};

double integrate_L_leg(const ConfigLeg& leg, double tol = 1e-10);

// Sum over consecutive waypoints of a configuration path; each step moves a
// single coordinate of a single point.
double integrate_L(const std::vector<std::vector<cplx>>& waypoints, double tol = 1e-10);

// log <prod sigma> for points in general position, anchored to the sign-sum
// value on the imaginary axis and integrated point by point.  Throws
// PathHitsCollision if the canonical route degenerates.
double log_correlation_anchored(const std::vector<cplx>& points, double tol = 1e-10);

struct DecorrelationSweep {
    std::vector<double> param;
    std::vector<double> residual;
};

// boundary: |<s_a s_a1 ...> / (<s_a><s_a1 ...>) - 1| as Im a decreases
// (supports one or two branch points).
DecorrelationSweep decorrelation_boundary(double re_a, const std::vector<double>& im_a_values,
                                          const std::vector<cplx>& branches);
// merging: |<s_a s_b> |a-b|^{1/4} - 1| as b approaches a.
DecorrelationSweep decorrelation_merging(cplx a, const std::vector<double>& offsets);

}  // namespace spinorlab
