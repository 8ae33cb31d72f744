#include "spinorlab/continuum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace spinorlab {

namespace {

cplx p_w(cplx w, cplx z) { return (z - w) * (z - std::conj(w)); }

void validate_points(const std::vector<cplx>& pts) {
    if (pts.empty()) throw CoincidentPoints{};
    for (size_t i = 0; i < pts.size(); ++i) {
        if (std::imag(pts[i]) <= 0) throw CoincidentPoints{};
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i] - pts[j]) < 1e-12) throw CoincidentPoints{};
    }
}

// e^{i pi/4} / sqrt((a_m - conj a_m) prod_{l != m} p_{a_l}(a_m)); the row
// scale of the residue at a_m.  Principal square root of the whole product:
// the sign per row is immaterial for the zero rows and fixed afterwards for
// row zero.
cplx residue_scale(const std::vector<cplx>& pts, size_t m) {
    cplx w = pts[m] - std::conj(pts[m]);
    for (size_t l = 0; l < pts.size(); ++l)
        if (l != m) w *= p_w(pts[l], pts[m]);
    return std::polar(1.0, M_PI / 4.0) / std::sqrt(w);
}

}  // namespace

std::vector<double> assemble_M(const std::vector<cplx>& pts) {
    validate_points(pts);
    size_t n = pts.size();
    std::vector<double> M(n * n);
    for (size_t m = 0; m < n; ++m) {
        cplx g = residue_scale(pts, m);
        cplx zp = 1.0;
        for (size_t c = 0; c < n; ++c) {
            M[m * n + c] = std::real(zp * g);
            zp *= pts[m];
        }
    }
    return M;
}

cplx HalfPlaneSpinor::polynomial(cplx z) const {
    cplx acc = 0.0, zp = 1.0;
    for (double qc : q) {
        acc += qc * zp;
        zp *= z;
    }
    return acc;
}

cplx HalfPlaneSpinor::polynomial_derivative(cplx z) const {
    cplx acc = 0.0, zp = 1.0;
    for (size_t n = 1; n < q.size(); ++n) {
        acc += double(n) * q[n] * zp;
        zp *= z;
    }
    return acc;
}

cplx HalfPlaneSpinor::eval(cplx z) const {
    cplx w = 1.0;
    for (cplx p : points) w *= p_w(p, z);
    return std::polar(1.0, M_PI / 4.0) * polynomial(z) / std::sqrt(w);
}

HalfPlaneSpinor solve_halfplane_spinor(const std::vector<cplx>& pts) {
    auto Mv = assemble_M(pts);
    size_t n = pts.size();
    Eigen::MatrixXd M(n, n);
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) M(long(r), long(c)) = Mv[r * n + c];
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(long(n));
    rhs[0] = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible())
        throw SingularSystem("interpolation system is singular; branch conventions broken");
    Eigen::VectorXd qv = lu.solve(rhs);

    HalfPlaneSpinor sp;
    sp.points = pts;
    sp.q.assign(qv.data(), qv.data() + n);
    sp.beta.resize(n);
    for (size_t s = 0; s < n; ++s) sp.beta[s] = residue_scale(pts, s) * sp.polynomial(pts[s]);
    // overall sign: the source residue is +1
    if (std::real(sp.beta[0]) < 0) {
        for (double& qc : sp.q) qc = -qc;
        for (cplx& b : sp.beta) b = -b;
    }
    if (std::abs(sp.beta[0] - 1.0) > 1e-8)
        throw SingularSystem("source residue differs from one after the sign fix");
    return sp;
}

cplx beta_limit(const HalfPlaneSpinor& sp, int s, double h0) {
    auto t = [&](double h) { return std::sqrt(h) * sp.eval(sp.points[size_t(s)] + h); };
    // t(h) = beta + c1 h + c2 h^2 + ...: two Richardson levels
    cplx t0 = t(h0), t1 = t(h0 / 2), t2 = t(h0 / 4);
    cplx r0 = 2.0 * t1 - t0, r1 = 2.0 * t2 - t1;
    return (4.0 * r1 - r0) / 3.0;
}

cplx coeff_A(const HalfPlaneSpinor& sp) {
    cplx a = sp.points[0];
    cplx pa = sp.polynomial(a);
    if (std::abs(pa) < 1e-12 * std::max(1.0, std::abs(sp.q[0]))) throw PolynomialZeroAtA{};
    cplx A = -1.0 / (4.0 * (a - std::conj(a)));
    for (size_t s = 1; s < sp.points.size(); ++s)
        A -= 0.25 * (1.0 / (a - sp.points[s]) + 1.0 / (a - std::conj(sp.points[s])));
    A += sp.polynomial_derivative(a) / (2.0 * pa);
    return A;
}

cplx coeff_A_fd(const HalfPlaneSpinor& sp, double h0) {
    cplx a = sp.points[0];
    auto g = [&](double h) { return std::sqrt(h) * sp.eval(a + h); };
    double sign = std::real(g(h0)) > 0 ? 1.0 : -1.0;
    auto A_of = [&](double h) { return (sign * g(h) - 1.0) / (2.0 * h); };
    cplx A0 = A_of(h0), A1 = A_of(h0 / 2), A2 = A_of(h0 / 4);
    cplx r0 = 2.0 * A1 - A0, r1 = 2.0 * A2 - A1;
    return (4.0 * r1 - r0) / 3.0;
}

cplx coeff_A_closed(cplx a) { return -1.0 / (8.0 * cplx{0, 1} * std::imag(a)); }

cplx coeff_A_closed(cplx a, cplx b) {
    double dp = std::abs(b - std::conj(a)), dm = std::abs(b - a);
    return coeff_A_closed(a) +
           (dp - dm) / (4.0 * (dp + dm)) * (1.0 / (b - a) - 1.0 / (std::conj(b) - a));
}

double coeff_B(cplx a, cplx b) {
    return std::sqrt(4.0 * std::imag(a) * std::imag(b)) /
           (std::abs(b - std::conj(a)) + std::abs(b - a));
}

double corr_plus_halfplane(const std::vector<cplx>& pts) {
    validate_points(pts);
    if (pts.size() == 1) return std::pow(2.0, 0.25) * std::pow(2.0 * std::imag(pts[0]), -0.125);
    if (pts.size() == 2) {
        cplx a = pts[0], b = pts[1];
        double u = std::sqrt(std::abs((b - a) / (b - std::conj(a))));
        return std::sqrt(u + 1.0 / u) *
               std::pow(2.0 * std::imag(a), -0.125) * std::pow(2.0 * std::imag(b), -0.125);
    }
    throw UnsupportedK("closed forms cover one and two points");
}

double corr_free_halfplane(cplx a, cplx b) {
    double u = std::sqrt(std::abs((b - a) / (b - std::conj(a))));
    return std::sqrt(1.0 / u - u) *
           std::pow(2.0 * std::imag(a), -0.125) * std::pow(2.0 * std::imag(b), -0.125);
}

double log_cft_correlation(const std::vector<cplx>& pts) {
    validate_points(pts);
    size_t n = pts.size();
    if (n > 21) throw Overflow("too many points for the sign sum");
    // pair terms log| (a_s - a_m) / (a_s - conj a_m) |
    std::vector<double> L(n * n, 0.0);
    for (size_t s = 0; s < n; ++s)
        for (size_t m = s + 1; m < n; ++m)
            L[s * n + m] = std::log(std::abs((pts[s] - pts[m]) / (pts[s] - std::conj(pts[m]))));
    // stable log-sum-exp over the 2^n sign assignments
    double emax = -1e300;
    std::vector<double> expo(size_t(1) << n);
    for (size_t mask = 0; mask < expo.size(); ++mask) {
        double e = 0;
        for (size_t s = 0; s < n; ++s) {
            double mu_s = (mask >> s) & 1 ? -1.0 : 1.0;
            for (size_t m = s + 1; m < n; ++m) {
                double mu_m = (mask >> m) & 1 ? -1.0 : 1.0;
                e += 0.5 * mu_s * mu_m * L[s * n + m];
            }
        }
        expo[mask] = e;
        emax = std::max(emax, e);
    }
    double acc = 0;
    for (double e : expo) acc += std::exp(e - emax);
    double log_bracket = -0.5 * double(n) * std::log(2.0) + emax + std::log(acc);
    double out = 0.5 * log_bracket;
    for (cplx p : pts) out -= 0.125 * std::log(2.0 * std::imag(p));
    return out;
}

double cft_correlation(const std::vector<cplx>& pts) { return std::exp(log_cft_correlation(pts)); }

double hyperbolic_distance_halfplane(cplx a, cplx b) {
    double t = std::norm(a - b) / (2.0 * std::imag(a) * std::imag(b));
    return std::acosh(1.0 + t);
}

double conformal_radius_halfplane(cplx a) { return 2.0 * std::imag(a); }
double conformal_radius_disc(cplx a) { return 1.0 - std::norm(a); }
double one_point_from_radius(double rad) { return std::pow(2.0, 0.25) * std::pow(rad, -0.125); }

cplx Mobius::deriv(cplx z) const {
    cplx den = c * z + d;
    return (a * d - b * c) / (den * den);
}

cplx Mobius::deriv2(cplx z) const {
    cplx den = c * z + d;
    return -2.0 * c * (a * d - b * c) / (den * den * den);
}

Mobius Mobius::after(const Mobius& f) const {
    return {a * f.a + b * f.c, a * f.b + b * f.d, c * f.a + d * f.c, c * f.b + d * f.d};
}

Mobius Mobius::disc_to_half() { return {cplx{0, -1}, cplx{0, 1}, 1, 1}; }

Mobius Mobius::half_automorphism(double alpha, double beta, double gamma, double delta) {
    if (alpha * delta - beta * gamma <= 0)
        throw NotConformal("real coefficients need positive determinant");
    return {alpha, beta, gamma, delta};
}

void Mobius::validate() const {
    if (std::abs(a * d - b * c) < 1e-14) throw NotConformal("degenerate coefficients");
}

cplx transport_spinor_value(cplx f_at_phi_z, const Mobius& phi, cplx z) {
    phi.validate();
    return f_at_phi_z * std::sqrt(phi.deriv(z));
}

cplx transport_A(cplx A_half_at_phi, const Mobius& phi, cplx z) {
    phi.validate();
    cplx d1 = phi.deriv(z);
    return A_half_at_phi * d1 + 0.125 * phi.deriv2(z) / d1;
}

double transport_correlation(double corr_half, const Mobius& phi,
                             const std::vector<cplx>& source_points) {
    phi.validate();
    double out = corr_half;
    for (cplx z : source_points) out *= std::pow(std::abs(phi.deriv(z)), 0.125);
    return out;
}

double correlation_from_map(double corr_half, const std::vector<double>& dphi_abs) {
    double out = corr_half;
    for (double d : dphi_abs) {
        if (d <= 0) throw NotConformal("derivative magnitude must be positive");
        out *= std::pow(d, 0.125);
    }
    return out;
}

}  // namespace spinorlab
