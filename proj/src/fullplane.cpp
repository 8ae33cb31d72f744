#include "spinorlab/fullplane.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <deque>

namespace spinorlab {

namespace {
constexpr int kTipX = 5;  // a + 3 delta/2
}

// Site tests.  f1 sites have their vertex to the left (x - 1 + y = 0 mod 4),
// fi sites to the right.
bool FullPlaneSpinor::is_f1_site(Coord c) const {
    return !is_even(c.x) && is_even(c.y) && ((c.x - 1 + c.y) % 4 + 4) % 4 == 0;
}
bool FullPlaneSpinor::is_fi_site(Coord c) const {
    return !is_even(c.x) && is_even(c.y) && ((c.x - 1 + c.y) % 4 + 4) % 4 == 2;
}

int FullPlaneSpinor::row_index_f1(int x, int y) const {
    if (y < 0 || y > u_ || (y & 1) || std::abs(x) > u_) return -1;
    int xmin = -u_ + ((((1 - y) - (-u_)) % 4 + 4) % 4);  // first f1 x in the row
    if (x < xmin || (x - xmin) % 4) return -1;
    return f1_row_start_[y / 2] + (x - xmin) / 4;
}

int FullPlaneSpinor::row_index_fi(int x, int y) const {
    if (y < 0 || y > u_ || (y & 1) || std::abs(x) > u_) return -1;
    int xmin = -u_ + ((((3 - y) - (-u_)) % 4 + 4) % 4);
    if (x < xmin || (x - xmin) % 4) return -1;
    return fi_row_start_[y / 2] + (x - xmin) / 4;
}

double FullPlaneSpinor::upper_f1(int x, int y) const {
    int i = row_index_f1(x, y);
    return i < 0 ? 0.0 : f1_[size_t(i)];
}

double FullPlaneSpinor::upper_fi(int x, int y) const {
    int i = row_index_fi(x, y);
    return i < 0 ? 0.0 : fi_[size_t(i)];
}

double FullPlaneSpinor::f1(Coord c) const { return upper_f1(c.x, std::abs(c.y)); }

double FullPlaneSpinor::fi(Coord c) const {
    double v = upper_fi(c.x, std::abs(c.y));
    return c.y < 0 ? -v : v;
}

cplx FullPlaneSpinor::midedge(Coord m) const {
    cplx acc = 0.0;
    for (int dy : {+1, -1}) {
        Coord c{m.x, m.y + dy};
        double s = segment_crosses_cut(m, c, marked()) ? -1.0 : 1.0;
        acc += s * (is_f1_site(c) ? cplx{f1(c), 0.0} : cplx{0.0, fi(c)});
    }
    return acc;
}

double FullPlaneSpinor::g(Coord c) const {
    if (!is_f1_site(c)) throw InvalidSite("g lives on the f1 sublattice");
    int y = std::abs(c.y);
    if (y > u_) throw TailNotConverged{};
    double acc = 0.0;
    int x = c.x;
    for (; x >= -u_; x -= 4) acc += upper_f1(x, y);
    // The row sum has a slowly decaying tail beyond the box (the summand
    // falls off only like r^{-3/2} near the cut).  Complete it with the
    // continuum antiderivative of the established window asymptotics,
    // vartheta * Re sqrt(z - a), evaluated at the truncation point.
    cplx zc = to_complex({x + 2, y}, delta_) - to_complex(marked(), delta_);
    double tail = vartheta_ * std::real(std::sqrt(zc));
    return delta_ * acc + tail;
}

FullPlaneSpinor::FullPlaneSpinor(double delta, int box_delta_units)
    : delta_(delta), box_(box_delta_units), u_(2 * box_delta_units) {
    int theta_x = kTipX + 4 * int(std::floor(1.0 / (2.0 * delta)));
    if (theta_x + 8 > u_) throw InvalidSite("box too small for the unit-scale window");

    // row layout
    int rows = u_ / 2 + 1;
    f1_row_start_.resize(rows + 1);
    fi_row_start_.resize(rows + 1);
    int acc1 = 0, acc2 = 0;
    for (int r = 0; r < rows; ++r) {
        int y = 2 * r;
        f1_row_start_[r] = acc1;
        fi_row_start_[r] = acc2;
        int xmin1 = -u_ + ((((1 - y) - (-u_)) % 4 + 4) % 4);
        int xmin2 = -u_ + ((((3 - y) - (-u_)) % 4 + 4) % 4);
        acc1 += (u_ - xmin1) / 4 + 1;
        acc2 += (u_ - xmin2) / 4 + 1;
    }
    f1_row_start_[rows] = acc1;
    fi_row_start_[rows] = acc2;
    f1_.assign(size_t(acc1), 0.0);
    fi_.assign(size_t(acc2), 0.0);

    // Dirichlet data and unknown numbering.  The slit is zero and the tip is
    // one.  The box rim carries the far-field closure vartheta * Re(1/sqrt):
    // the amplitude is linear in the data, so one factorization with two
    // right-hand sides (tip part, unit-amplitude rim part) determines
    // vartheta self-consistently from its defining lattice point near a + 1.
    std::vector<int> unknown(size_t(acc1), -1);
    std::vector<double> rim_shape(size_t(acc1), 0.0);
    std::vector<int> sites_x, sites_y;
    int n_unknown = 0;
    cplx a_phys = to_complex(marked(), delta_);
    for (int y = 0; y <= u_; y += 2) {
        int xmin = -u_ + ((((1 - y) - (-u_)) % 4 + 4) % 4);
        for (int x = xmin; x <= u_; x += 4) {
            int idx = row_index_f1(x, y);
            if (y == 0 && x <= 1) continue;  // slit stays zero
            if (std::abs(x) > u_ - 2 || y > u_ - 2) {
                cplx z = to_complex({x, y}, delta_) - a_phys;
                rim_shape[size_t(idx)] = std::real(1.0 / std::sqrt(z));
                continue;
            }
            if (y == 0 && x == kTipX) continue;  // tip
            unknown[size_t(idx)] = n_unknown++;
            sites_x.push_back(x);
            sites_y.push_back(y);
        }
    }
    f1_[size_t(row_index_f1(kTipX, 0))] = 1.0;

    // half-plane Laplacian with the symmetric row-zero stencil
    Eigen::SparseMatrix<double> A(n_unknown, n_unknown);
    Eigen::VectorXd b_tip = Eigen::VectorXd::Zero(n_unknown);
    Eigen::VectorXd b_rim = Eigen::VectorXd::Zero(n_unknown);
    {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(size_t(n_unknown) * 5);
        for (int i = 0; i < n_unknown; ++i) {
            int x = sites_x[size_t(i)], y = sites_y[size_t(i)];
            double diag = y == 0 ? 2.0 : 4.0;
            trips.emplace_back(i, i, diag);
            const int nb[4][2] = {{x - 2, y + 2}, {x + 2, y + 2}, {x - 2, y - 2}, {x + 2, y - 2}};
            int n_used = y == 0 ? 2 : 4;
            for (int k = 0; k < n_used; ++k) {
                int xi = nb[k][0], yi = nb[k][1];
                int idx = row_index_f1(xi, yi);
                if (idx < 0) continue;
                if (unknown[size_t(idx)] >= 0) {
                    trips.emplace_back(i, unknown[size_t(idx)], -1.0);
                } else {
                    b_tip[i] += f1_[size_t(idx)];
                    b_rim[i] += rim_shape[size_t(idx)];
                }
            }
        }
        A.setFromTriplets(trips.begin(), trips.end());
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw SolverDivergenceFP{};
    Eigen::VectorXd sol_tip = ldlt.solve(b_tip);
    Eigen::VectorXd sol_rim = ldlt.solve(b_rim);
    if (ldlt.info() != Eigen::Success) throw SolverDivergenceFP{};

    int theta_site = unknown[size_t(row_index_f1(theta_x, 0))];
    double denom = 1.0 - sol_rim[theta_site];
    if (denom <= 0.1) throw SolverDivergenceFP{};
    vartheta_ = sol_tip[theta_site] / denom;
    for (int i = 0; i < n_unknown; ++i) {
        int idx = row_index_f1(sites_x[size_t(i)], sites_y[size_t(i)]);
        f1_[size_t(idx)] = sol_tip[i] + vartheta_ * sol_rim[i];
    }
    for (size_t idx = 0; idx < f1_.size(); ++idx)
        if (rim_shape[idx] != 0.0) f1_[idx] = vartheta_ * rim_shape[idx];

    // conjugate component by breadth-first integration anchored at
    // a + 5 delta/2 = (7, 0).  The source corner (3, 0) is excluded from the
    // cover: the holomorphicity relations through it do not hold, so no step
    // may enter or leave it.
    {
        std::vector<char> seen(fi_.size(), 0);
        int excluded = row_index_fi(3, 0);
        if (excluded >= 0) seen[size_t(excluded)] = 1;  // source corner, left at zero
        int start = row_index_fi(7, 0);
        seen[size_t(start)] = 1;
        std::deque<std::pair<int, int>> queue{{7, 0}};
        while (!queue.empty()) {
            auto [x, y] = queue.front();
            queue.pop_front();
            double fd = fi_[size_t(row_index_fi(x, y))];
            const int step[4][2] = {{+2, +2}, {+2, -2}, {-2, -2}, {-2, +2}};
            for (int k = 0; k < 4; ++k) {
                int dx = step[k][0], dy = step[k][1];
                int nx = x + dx, ny = y + dy;
                int idx = row_index_fi(nx, ny);
                if (idx < 0 || seen[size_t(idx)]) continue;
                double val;
                if (dx == 2 && dy == 2)
                    val = fd + upper_f1(x + 2, y) - upper_f1(x, y + 2);
                else if (dx == 2 && dy == -2)
                    val = fd - upper_f1(x + 2, y) + upper_f1(x, y - 2);
                else if (dx == -2 && dy == -2)
                    val = fd - upper_f1(x, y - 2) + upper_f1(x - 2, y);
                else
                    val = fd + upper_f1(x, y + 2) - upper_f1(x - 2, y);
                fi_[size_t(idx)] = val;
                seen[size_t(idx)] = 1;
                queue.push_back({nx, ny});
            }
        }
    }

    nu_ = g({theta_x, 0});
}

double FullPlaneSpinor::g_harmonicity_residual(int max_radius_units) const {
    double worst = 0.0;
    for (int x = kTipX; x <= kTipX + max_radius_units; x += 4) {
        double lap = 2.0 * (g({x - 2, 2}) + g({x + 2, 2})) - 4.0 * g({x, 0});
        worst = std::max(worst, std::abs(lap) / delta_);
    }
    return worst;
}

double FullPlaneSpinor::conjugation_residual(int max_radius_units) const {
    int R = std::min(max_radius_units, u_ - 4);
    double worst = 0.0;
    for (int y = 0; y + 2 <= R; y += 2) {
        int xmin = -R + ((((3 - y) - (-R)) % 4 + 4) % 4);
        for (int x = xmin; x + 2 <= R; x += 4) {
            if ((x == 3 || x == 1) && y == 0) continue;  // quads at the source corner
            int here = row_index_fi(x, y), ne = row_index_fi(x + 2, y + 2);
            if (here < 0 || ne < 0) continue;
            double r = fi_[size_t(ne)] - fi_[size_t(here)] - upper_f1(x + 2, y) +
                       upper_f1(x, y + 2);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

}  // namespace spinorlab
