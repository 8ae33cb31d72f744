#include "spinorlab/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "spinorlab/kernels.hpp"

namespace spinorlab {

namespace {

// Grid view of the sweep: `width` sites per column, `length` columns, spin
// bit 1 = -1.  ext(p, q) counts frozen + neighbors outside the grid (zero for
// free boundaries).  Marked sites insert a sign at their column.
struct GridSpec {
    int width = 0;
    int length = 0;
    bool plus_bc = false;
    // marked sites per column, as bit masks over the column state
    std::vector<uint32_t> marked_bits;
};

double grid_expectation(const GridSpec& g) {
    const int W = g.width, L = g.length;
    const size_t N = size_t(1) << W;
    std::vector<double> apow(4 * W * L + 1);
    apow[0] = 1.0;
    for (size_t i = 1; i < apow.size(); ++i) apow[i] = apow[i - 1] * weights::alpha_c;

    // Column weight = alpha^{intra-column disagreements + frozen-boundary
    // disagreements}.  Only the exterior-side count differs between edge and
    // middle columns.
    uint32_t mask_all = uint32_t((N - 1));
    auto column_weights = [&](bool edge_col) {
        std::vector<double> w(N);
        for (uint32_t s = 0; s < N; ++s) {
            int e = __builtin_popcount((s ^ (s >> 1)) & (mask_all >> 1));
            if (g.plus_bc) {
                int ext = 0;
                if (s & 1) ++ext;
                if (s >> (W - 1)) ++ext;
                if (edge_col) ext += __builtin_popcount(s);
                e += ext;
            }
            w[s] = apow[e];
        }
        return w;
    };
    std::vector<double> w_mid = column_weights(false);
    std::vector<double> w_edge = column_weights(L > 1 ? true : false);
    if (L == 1 && g.plus_bc) {
        // single column: both sides frozen
        for (uint32_t s = 0; s < N; ++s) {
            int ext = 2 * __builtin_popcount(s);
            w_edge[s] = w_mid[s] * apow[ext];
        }
        // w_mid entries already include the transverse frozen sides
    }

    auto apply_marks = [&](std::vector<double>& v, uint32_t bits) {
        if (!bits) return;
        for (uint32_t s = 0; s < N; ++s)
            if (__builtin_popcount(s & bits) & 1) v[s] = -v[s];
    };

    std::vector<double> vz(N), vs(N);
    for (uint32_t s = 0; s < N; ++s) vz[s] = w_edge[s];
    vs = vz;
    apply_marks(vs, g.marked_bits[0]);

    for (int q = 1; q < L; ++q) {
        for (int p = 0; p < W; ++p) {
            kernels::bond_butterfly(vz.data(), N, size_t(1) << p, weights::alpha_c);
            kernels::bond_butterfly(vs.data(), N, size_t(1) << p, weights::alpha_c);
        }
        const std::vector<double>& w = (q == L - 1) ? w_edge : w_mid;
        kernels::mul_inplace(vz.data(), w.data(), N);
        kernels::mul_inplace(vs.data(), w.data(), N);
        apply_marks(vs, g.marked_bits[q]);
        // keep magnitudes in range; identical rescaling leaves the ratio exact
        double m = 0;
        for (uint32_t s = 0; s < N; ++s) m = std::max(m, std::abs(vz[s]));
        if (m > 1e200 || (m > 0 && m < 1e-200)) {
            kernels::scale(vz.data(), 1.0 / m, N);
            kernels::scale(vs.data(), 1.0 / m, N);
        }
    }
    double z = kernels::sum(vz.data(), N);
    double s = kernels::sum(vs.data(), N);
    return s / z;
}

}  // namespace

Estimate transfer_matrix_correlation(int m, int n, BoundaryCond bc,
                                     const std::vector<Coord>& marked) {
    if (m <= 0 || n <= 0) throw EmptyDomain{};

    // Site grids in the coordinates of DiscreteDomain::rectangle:
    //   face (p, q)   at (2p + 2q, 2 + 2p - 2q),      p in [0,m), q in [0,n)
    //   vertex (i, j) at (-2 + 2i + 2j, 2 + 2i - 2j), i in [0,m], j in [0,n]
    GridSpec g;
    int P, Q;  // site grid dimensions
    auto locate = [&](Coord c, int& p, int& q) {
        if (bc == BoundaryCond::FreeVertices) {
            if (!is_vertex(c)) throw InvalidSite("marked site must be a vertex");
            p = (c.x + 2 + c.y - 2) / 4;
            q = (c.x + 2 - c.y + 2) / 4;
        } else {
            if (!is_face(c)) throw InvalidSite("marked site must be a face");
            p = (c.x + c.y - 2) / 4;
            q = (c.x - c.y + 2) / 4;
        }
        if (p < 0 || p >= P || q < 0 || q >= Q) throw InvalidSite("marked site outside grid");
    };
    if (bc == BoundaryCond::FreeVertices) {
        P = m + 1;
        Q = n + 1;
        g.plus_bc = false;
    } else {
        P = m;
        Q = n;
        g.plus_bc = bc == BoundaryCond::PlusFaces;
    }

    // Sweep along the longer axis.
    bool transpose = P > Q;
    g.width = transpose ? Q : P;
    g.length = transpose ? P : Q;
    if (g.width > kTransferWidthCap) throw TooWide{};
    g.marked_bits.assign(g.length, 0);
    for (Coord c : marked) {
        int p, q;
        locate(c, p, q);
        if (transpose) std::swap(p, q);
        g.marked_bits[q] ^= uint32_t(1) << p;
    }
    return {grid_expectation(g), 0.0, Method::Transfer};
}

}  // namespace spinorlab
