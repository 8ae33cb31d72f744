#pragma once

// Continuum half-plane spinors and correlation functions.  The spinor with
// branch points a_0..a_k in the upper half-plane is
//
//   f(z) = e^{i pi/4} P(z) / sqrt(p_{a_0}(z) ... p_{a_k}(z)),
//   p_w(z) = (z - w)(z - conj w),
//
// with a real polynomial P of degree k fixed by the residue conditions
// Re beta_0 = 1 and Re beta_s = 0, beta_s = lim sqrt(z - a_s) f(z).  The
// resulting linear system is solved directly; the overall sign is fixed so
// that beta_0 = +1.  The expansion coefficients A (log-derivative of the
// correlations) and B (free/plus ratio, one branch point) follow.

#include <vector>

#include "spinorlab/geometry.hpp"

namespace spinorlab {

struct ContinuumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CoincidentPoints : ContinuumError {
    CoincidentPoints() : ContinuumError("marked points coincide or leave the half-plane") {}
};
struct SingularSystem : ContinuumError { using ContinuumError::ContinuumError; };
struct PolynomialZeroAtA : ContinuumError {
    PolynomialZeroAtA() : ContinuumError("interpolation polynomial vanishes at the source") {}
};
struct UnsupportedK : ContinuumError { using ContinuumError::ContinuumError; };
struct Overflow : ContinuumError { using ContinuumError::ContinuumError; };
struct NotConformal : ContinuumError { using ContinuumError::ContinuumError; };

struct HalfPlaneSpinor {
    std::vector<cplx> points;  // a_0 .. a_k
    std::vector<double> q;     // polynomial coefficients q_0 .. q_k
    std::vector<cplx> beta;    // residues; beta[0] = 1 after the sign fix

    cplx polynomial(cplx z) const;
    cplx polynomial_derivative(cplx z) const;
    // principal-branch evaluation; spinor values are defined up to the sheet
    // sign, consistently within a small neighborhood
    cplx eval(cplx z) const;
};

// Row-major (k+1)^2 interpolation matrix; row m scales the residue at a_m.
std::vector<double> assemble_M(const std::vector<cplx>& points);

HalfPlaneSpinor solve_halfplane_spinor(const std::vector<cplx>& points);

// Residue by a small-h limit with Richardson extrapolation (sign follows the
// principal branch; compare up to sign).
cplx beta_limit(const HalfPlaneSpinor& sp, int s, double h0 = 1e-3);

// Expansion coefficient A at the source point a_0.
cplx coeff_A(const HalfPlaneSpinor& sp);
// Finite-difference cross-check of the same coefficient.
cplx coeff_A_fd(const HalfPlaneSpinor& sp, double h0 = 1e-3);
// Closed forms for zero and one branch point.
cplx coeff_A_closed(cplx a);
cplx coeff_A_closed(cplx a, cplx b);
double coeff_B(cplx a, cplx b);

// Half-plane correlation functions.
double corr_plus_halfplane(const std::vector<cplx>& points);   // k <= 1 closed forms
double corr_free_halfplane(cplx a, cplx b);
double log_cft_correlation(const std::vector<cplx>& points);   // k <= 20
double cft_correlation(const std::vector<cplx>& points);

// Hyperbolic-distance and conformal-radius forms (equal to the above).
double hyperbolic_distance_halfplane(cplx a, cplx b);
double conformal_radius_halfplane(cplx a);  // 2 Im a
double conformal_radius_disc(cplx a);       // 1 - |a|^2
double one_point_from_radius(double rad);   // 2^{1/4} rad^{-1/8}

struct Mobius {
    cplx a{1}, b{0}, c{0}, d{1};  // z -> (az + b) / (cz + d)
    cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
    cplx deriv(cplx z) const;
    cplx deriv2(cplx z) const;
    Mobius after(const Mobius& first) const;  // this( first(z) )
    static Mobius identity() { return {}; }
    static Mobius disc_to_half();              // unit disc onto the upper half-plane
    static Mobius half_automorphism(double alpha, double beta, double gamma, double delta);
    void validate() const;
};

// Covariance transport through phi : source domain -> half-plane.
cplx transport_spinor_value(cplx f_at_phi_z, const Mobius& phi, cplx z);
cplx transport_A(cplx A_half_at_phi, const Mobius& phi, cplx z);
double transport_correlation(double corr_half, const Mobius& phi,
                             const std::vector<cplx>& source_points);
// General form: target values and derivative magnitudes supplied directly.
double correlation_from_map(double corr_half, const std::vector<double>& dphi_abs);

}  // namespace spinorlab
