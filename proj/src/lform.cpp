#include "spinorlab/lform.hpp"

#include <cmath>

namespace spinorlab {

namespace {

// Re[A(a_j; rest) da_j] along the leg direction at parameter t in [0,1].
double leg_integrand(const ConfigLeg& leg, double t, bool horizontal, double span) {
    std::vector<cplx> pts = leg.points;
    cplx from = pts[size_t(leg.moving)];
    pts[size_t(leg.moving)] = horizontal ? cplx{std::real(from) + t * span, std::imag(from)}
                                         : cplx{std::real(from), std::imag(from) + t * span};
    // coefficient A is defined with the moving point first
    std::swap(pts[0], pts[size_t(leg.moving)]);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (std::imag(pts[i]) <= 0) throw PathHitsCollision{};
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i] - pts[j]) < 1e-9) throw PathHitsCollision{};
    }
    cplx A = pts.size() == 1 ? coeff_A_closed(pts[0]) : coeff_A(solve_halfplane_spinor(pts));
    return horizontal ? std::real(A) : -std::imag(A);
}

double adaptive_simpson(const ConfigLeg& leg, bool horizontal, double span, double t0, double t1,
                        double f0, double fm, double f1, double whole, double tol, int depth) {
    double tm = 0.5 * (t0 + t1);
    double tl = 0.5 * (t0 + tm), tr = 0.5 * (tm + t1);
    double fl = leg_integrand(leg, tl, horizontal, span);
    double fr = leg_integrand(leg, tr, horizontal, span);
    double left = (tm - t0) / 6.0 * (f0 + 4.0 * fl + fm);
    double right = (t1 - tm) / 6.0 * (fm + 4.0 * fr + f1);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(leg, horizontal, span, t0, tm, f0, fl, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(leg, horizontal, span, tm, t1, fm, fr, f1, right, tol / 2, depth - 1);
}

}  // namespace

double integrate_L_leg(const ConfigLeg& leg, double tol) {
    cplx from = leg.points[size_t(leg.moving)];
    double dx = std::real(leg.target - from), dy = std::imag(leg.target - from);
    if (std::abs(dx) > 1e-15 && std::abs(dy) > 1e-15)
        throw ContinuumError("leg must be axis-parallel");
    bool horizontal = std::abs(dx) > std::abs(dy);
    double span = horizontal ? dx : dy;
    if (span == 0.0) return 0.0;
    double f0 = leg_integrand(leg, 0.0, horizontal, span);
    double fm = leg_integrand(leg, 0.5, horizontal, span);
    double f1 = leg_integrand(leg, 1.0, horizontal, span);
    double whole = (f0 + 4.0 * fm + f1) / 6.0;
    return span *
           adaptive_simpson(leg, horizontal, span, 0.0, 1.0, f0, fm, f1, whole, tol / std::abs(span),
                            40);
}

double integrate_L(const std::vector<std::vector<cplx>>& waypoints, double tol) {
    double acc = 0.0;
    for (size_t w = 0; w + 1 < waypoints.size(); ++w) {
        const auto& cur = waypoints[w];
        const auto& nxt = waypoints[w + 1];
        if (cur.size() != nxt.size()) throw ContinuumError("waypoint size mismatch");
        int moving = -1;
        for (size_t j = 0; j < cur.size(); ++j) {
            if (std::abs(cur[j] - nxt[j]) < 1e-15) continue;
            if (moving >= 0) throw ContinuumError("waypoints move more than one point");
            moving = int(j);
        }
        if (moving < 0) continue;
        ConfigLeg leg{cur, moving, nxt[size_t(moving)]};
        acc += integrate_L_leg(leg, tol);
    }
    return acc;
}

namespace {

bool segment_clear(cplx from, cplx to, const std::vector<cplx>& pts, size_t skip) {
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i == skip) continue;
        cplx p = pts[i];
        double lo, hi, off;
        if (std::abs(std::imag(to - from)) < 1e-15) {  // horizontal
            lo = std::min(std::real(from), std::real(to));
            hi = std::max(std::real(from), std::real(to));
            off = std::abs(std::imag(p - from));
            if (off < 1e-6 && std::real(p) > lo - 1e-6 && std::real(p) < hi + 1e-6) return false;
        } else {
            lo = std::min(std::imag(from), std::imag(to));
            hi = std::max(std::imag(from), std::imag(to));
            off = std::abs(std::real(p - from));
            if (off < 1e-6 && std::imag(p) > lo - 1e-6 && std::imag(p) < hi + 1e-6) return false;
        }
    }
    return true;
}

}  // namespace

double log_correlation_anchored(const std::vector<cplx>& points, double tol) {
    size_t n = points.size();
    if (n == 1) return std::log(corr_plus_halfplane(points));
    // anchor stacked on the imaginary axis above every target, where the
    // sign-sum value applies
    double top = 0, xmax = 0;
    for (cplx p : points) {
        top = std::max(top, std::imag(p));
        xmax = std::max(xmax, std::abs(std::real(p)));
    }
    std::vector<cplx> anchor(n);
    for (size_t j = 0; j < n; ++j) anchor[j] = cplx{0.0, top + 1.0 + double(j)};
    double logv = log_cft_correlation(anchor);

    // move each point to its target through a detour column free of the
    // other points: across at the anchor height, down, then in from the side
    std::vector<cplx> cur = anchor;
    for (size_t j = 0; j < n; ++j) {
        cplx tgt = points[j];
        bool routed = false;
        for (int attempt = 0; attempt < 8 && !routed; ++attempt) {
            double xstar = (attempt % 2 == 0 ? 1.0 : -1.0) * (xmax + 1.0 + double(j) +
                                                              3.0 * double(attempt / 2));
            cplx w1{xstar, std::imag(cur[j])};
            cplx w2{xstar, std::imag(tgt)};
            if (!segment_clear(cur[j], w1, cur, j) || !segment_clear(w1, w2, cur, j) ||
                !segment_clear(w2, tgt, cur, j))
                continue;
            for (cplx to : {w1, w2, tgt}) {
                ConfigLeg leg{cur, int(j), to};
                logv += integrate_L_leg(leg, tol);
                cur[j] = to;
            }
            routed = true;
        }
        if (!routed) throw PathHitsCollision{};
    }
    return logv;
}

DecorrelationSweep decorrelation_boundary(double re_a, const std::vector<double>& im_a_values,
                                          const std::vector<cplx>& branches) {
    DecorrelationSweep out;
    double log_rest = branches.size() == 1
                          ? std::log(corr_plus_halfplane(branches))
                          : log_correlation_anchored(branches);
    for (double y : im_a_values) {
        cplx a{re_a, y};
        std::vector<cplx> all{a};
        for (cplx b : branches) all.push_back(b);
        double log_full = branches.size() == 1 ? std::log(corr_plus_halfplane(all))
                                               : log_correlation_anchored(all);
        double log_a = std::log(corr_plus_halfplane({a}));
        out.param.push_back(y);
        out.residual.push_back(std::abs(std::exp(log_full - log_a - log_rest) - 1.0));
    }
    return out;
}

DecorrelationSweep decorrelation_merging(cplx a, const std::vector<double>& offsets) {
    DecorrelationSweep out;
    for (double eps : offsets) {
        cplx b = a + eps;
        double ratio = corr_plus_halfplane({a, b}) * std::pow(std::abs(a - b), 0.25);
        out.param.push_back(eps);
        out.residual.push_back(std::abs(ratio - 1.0));
    }
    return out;
}

}  // namespace spinorlab
