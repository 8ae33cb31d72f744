#include "spinorlab/ising.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace spinorlab {

namespace {

std::vector<double> alpha_powers(int n) {
    std::vector<double> p(n + 1);
    p[0] = 1.0;
    for (int i = 1; i <= n; ++i) p[i] = p[i - 1] * weights::alpha_c;
    return p;
}

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

// One Gray-code sweep over the configurations whose top bits equal `prefix`.
SignedSums sweep(const SpinGraph& g, uint32_t marked_mask, int low_bits, uint32_t prefix,
                 const std::vector<double>& apow) {
    EdgeMask contour;
    uint32_t neg = prefix << low_bits;
    for (int i = low_bits; i < g.n_sites; ++i)
        if ((neg >> i) & 1) contour ^= g.incidence[i];
    Kahan z, s;
    uint64_t total = uint64_t(1) << low_bits;
    int sign = (__builtin_popcount(neg & marked_mask) & 1) ? -1 : 1;
    for (uint64_t i = 0;; ++i) {
        double w = apow[contour.popcount()];
        z.add(w);
        s.add(sign > 0 ? w : -w);
        if (i + 1 == total) break;
        int b = __builtin_ctzll(i + 1);
        neg ^= uint32_t(1) << b;
        contour ^= g.incidence[b];
        if ((marked_mask >> b) & 1) sign = -sign;
    }
    return {z.s, s.s};
}

}  // namespace

SpinGraph SpinGraph::faces_plus(const DiscreteDomain& dom) {
    SpinGraph g;
    g.n_sites = dom.face_count();
    g.n_edges = dom.side_edge_count();
    g.site_pos = dom.faces();
    g.incidence.assign(g.n_sites, {});
    for (int e = 0; e < g.n_edges; ++e) {
        const MidedgeInfo& me = dom.midedges()[e];
        if (me.f1 >= 0) g.incidence[me.f1].flip(e);
        if (me.f2 >= 0) g.incidence[me.f2].flip(e);
    }
    return g;
}

SpinGraph SpinGraph::faces_free(const DiscreteDomain& dom) {
    SpinGraph g;
    g.n_sites = dom.face_count();
    g.site_pos = dom.faces();
    g.incidence.assign(g.n_sites, {});
    int e = 0;
    for (const MidedgeInfo& me : dom.midedges()) {
        if (me.cls != MidedgeClass::Interior) continue;
        g.incidence[me.f1].flip(e);
        g.incidence[me.f2].flip(e);
        ++e;
    }
    g.n_edges = e;
    return g;
}

SpinGraph SpinGraph::vertices_free(const DiscreteDomain& dom) {
    SpinGraph g;
    g.n_sites = int(dom.int_vertices().size());
    g.n_edges = dom.side_edge_count();
    g.site_pos = dom.int_vertices();
    g.incidence.assign(g.n_sites, {});
    for (int e = 0; e < g.n_edges; ++e) {
        const MidedgeInfo& me = dom.midedges()[e];
        g.incidence[dom.vertex_index(me.v1)].flip(e);
        g.incidence[dom.vertex_index(me.v2)].flip(e);
    }
    return g;
}

uint32_t marked_mask_of(const SpinGraph& g, const std::vector<Coord>& marked) {
    uint32_t mask = 0;
    for (Coord m : marked) {
        auto it = std::lower_bound(g.site_pos.begin(), g.site_pos.end(), m);
        if (it == g.site_pos.end() || *it != m) throw InvalidSite("marked site not in graph");
        mask ^= uint32_t(1) << (it - g.site_pos.begin());
    }
    return mask;
}

SignedSums enumerate_signed(const SpinGraph& g, uint32_t marked_mask, int cap) {
    if (g.n_sites > cap || g.n_sites > kEnumerationCap) throw TooLarge{};
    if (g.n_edges > 128) throw TooLarge{};
    auto apow = alpha_powers(g.n_edges);
    if (g.n_sites < 18) return sweep(g, marked_mask, g.n_sites, 0, apow);

    // Fixed prefix split; partials merged in prefix order so the result does
    // not depend on scheduling.
    const int kPrefix = 2;
    int low = g.n_sites - kPrefix;
    std::array<SignedSums, 1 << kPrefix> parts;
    std::vector<std::thread> pool;
    for (uint32_t p = 0; p < (1u << kPrefix); ++p)
        pool.emplace_back([&, p] { parts[p] = sweep(g, marked_mask, low, p, apow); });
    for (auto& t : pool) t.join();
    SignedSums total;
    for (const auto& part : parts) {
        total.z += part.z;
        total.signed_ += part.signed_;
    }
    return total;
}

Estimate enumerate_correlation(const DiscreteDomain& dom, BoundaryCond bc,
                               const std::vector<Coord>& marked, int cap) {
    SpinGraph g;
    switch (bc) {
        case BoundaryCond::PlusFaces: g = SpinGraph::faces_plus(dom); break;
        case BoundaryCond::FreeFaces: g = SpinGraph::faces_free(dom); break;
        case BoundaryCond::FreeVertices: g = SpinGraph::vertices_free(dom); break;
    }
    auto sums = enumerate_signed(g, marked_mask_of(g, marked), cap);
    return {sums.signed_ / sums.z, 0.0, Method::Enumeration};
}

double signed_partition_sum(const DiscreteDomain& dom, const std::vector<Coord>& marked_faces,
                            int cap) {
    SpinGraph g = SpinGraph::faces_plus(dom);
    return enumerate_signed(g, marked_mask_of(g, marked_faces), cap).signed_;
}

double partition_sum(const DiscreteDomain& dom, int cap) {
    SpinGraph g = SpinGraph::faces_plus(dom);
    return enumerate_signed(g, 0, cap).z;
}

ContourConfig spins_to_contours(const DiscreteDomain& dom, const std::vector<int>& face_spins) {
    if (int(face_spins.size()) != dom.face_count())
        throw BadBoundary("spin vector size mismatch");
    for (int s : face_spins)
        if (s != 1 && s != -1) throw BadBoundary("spins must be +-1");
    ContourConfig c;
    for (int e = 0; e < dom.side_edge_count(); ++e) {
        const MidedgeInfo& me = dom.midedges()[e];
        int s1 = me.f1 >= 0 ? face_spins[me.f1] : 1;
        int s2 = me.f2 >= 0 ? face_spins[me.f2] : 1;
        if (s1 != s2) c.edges.push_back(me.pos);
    }
    return c;
}

std::vector<int> contours_to_spins(const DiscreteDomain& dom, const ContourConfig& contour) {
    std::unordered_set<Coord, CoordHash> cset(contour.edges.begin(), contour.edges.end());
    for (Coord e : contour.edges) {
        int mi = dom.midedge_index(e);
        if (mi < 0 || mi >= dom.side_edge_count())
            throw BadBoundary("contour edge is not a side edge of the domain");
    }
    std::vector<int> spins(dom.face_count(), 0);
    // Propagate from the exterior (+1) across every side edge.
    std::vector<int> stack;
    auto assign = [&](int f, int s) {
        if (spins[f] == 0) {
            spins[f] = s;
            stack.push_back(f);
            return;
        }
        if (spins[f] != s) throw BadBoundary("contour is not a closed configuration");
    };
    for (int e = 0; e < dom.side_edge_count(); ++e) {
        const MidedgeInfo& me = dom.midedges()[e];
        if (me.cls != MidedgeClass::Boundary) continue;
        int f = me.f1 >= 0 ? me.f1 : me.f2;
        assign(f, cset.count(me.pos) ? -1 : 1);
    }
    while (!stack.empty()) {
        int f = stack.back();
        stack.pop_back();
        for (Coord m : face_sides(dom.faces()[f])) {
            int mi = dom.midedge_index(m);
            if (mi < 0 || mi >= dom.side_edge_count()) continue;
            const MidedgeInfo& me = dom.midedges()[mi];
            if (me.cls != MidedgeClass::Interior) continue;
            int other = me.f1 == f ? me.f2 : me.f1;
            assign(other, cset.count(m) ? -spins[f] : spins[f]);
        }
    }
    for (int s : spins)
        if (s == 0) throw BadBoundary("contour leaves a face undetermined");
    // Round trip must reproduce the contour exactly (even-degree check).
    ContourConfig back = spins_to_contours(dom, spins);
    if (back.edges.size() != cset.size()) throw BadBoundary("contour has odd-degree vertices");
    for (Coord e : back.edges)
        if (!cset.count(e)) throw BadBoundary("contour has odd-degree vertices");
    return spins;
}

}  // namespace spinorlab
