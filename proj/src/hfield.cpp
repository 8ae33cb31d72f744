#include "spinorlab/hfield.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace spinorlab {

namespace {

constexpr double kBoundaryConductance = 2.0 * 0.41421356237309514547;  // 2 (sqrt 2 - 1)

}  // namespace

double HField::face(const DiscreteDomain& dom, Coord f) const {
    if (dom.has_face(f)) return face_h[dom.face_index(f)];
    auto it = std::lower_bound(dom.boundary_faces().begin(), dom.boundary_faces().end(), f);
    if (it == dom.boundary_faces().end() || !(*it == f))
        throw InvalidSite("face outside the domain closure");
    return face_h[dom.face_count() + (it - dom.boundary_faces().begin())];
}

double HField::vertex(const DiscreteDomain& dom, Coord v) const {
    if (dom.has_int_vertex(v)) return vertex_h[dom.vertex_index(v)];
    return 0.0;  // boundary vertices are pinned to the reference gauge
}

HField integrate_H(const DiscreteDomain& dom, const MarkedConfig& cfg, double delta,
                   const std::function<double(Coord)>& corner_abs2, double tol) {
    const Coord src{cfg.a.x + 1, cfg.a.y};
    const int NF = dom.face_count(), NB = int(dom.boundary_faces().size());
    const int NV = int(dom.int_vertices().size());

    // constraint list: face node, vertex node, drop = 2 delta |F|^2
    struct Constraint {
        int face;
        int vertex;
        double drop;
    };
    std::vector<Constraint> cons;
    auto face_node = [&](Coord f) -> int {
        if (dom.has_face(f)) return dom.face_index(f);
        auto it =
            std::lower_bound(dom.boundary_faces().begin(), dom.boundary_faces().end(), f);
        if (it == dom.boundary_faces().end() || !(*it == f)) return -1;
        return NF + int(it - dom.boundary_faces().begin());
    };
    for (const CornerInfo& c : dom.corners()) {
        Coord f{2 * c.pos.x - c.vertex.x, 2 * c.pos.y - c.vertex.y};
        int fn = face_node(f);
        if (fn < 0) continue;
        double a2 = c.pos == src ? 1.0 : corner_abs2(c.pos);
        cons.push_back({fn, dom.vertex_index(c.vertex), 2.0 * delta * a2});
    }

    // propagate from a boundary face pinned to zero
    std::vector<std::vector<int>> by_face(NF + NB), by_vertex(NV);
    for (int i = 0; i < int(cons.size()); ++i) {
        by_face[cons[i].face].push_back(i);
        by_vertex[cons[i].vertex].push_back(i);
    }
    HField h;
    h.face_h.assign(NF + NB, 0.0);
    h.vertex_h.assign(NV, 0.0);
    std::vector<char> fset(NF + NB, 0), vset(NV, 0);
    int seed = NF;  // first boundary face
    while (seed < NF + NB && by_face[seed].empty()) ++seed;
    if (seed == NF + NB) throw InconsistentField("no boundary face in the constraint graph");
    fset[seed] = 1;
    std::deque<std::pair<char, int>> queue{{'f', seed}};
    while (!queue.empty()) {
        auto [kind, node] = queue.front();
        queue.pop_front();
        if (kind == 'f') {
            for (int ci : by_face[node]) {
                int v = cons[ci].vertex;
                if (vset[v]) continue;
                vset[v] = 1;
                h.vertex_h[v] = h.face_h[node] - cons[ci].drop;
                queue.push_back({'v', v});
            }
        } else {
            for (int ci : by_vertex[node]) {
                int f = cons[ci].face;
                if (fset[f]) continue;
                fset[f] = 1;
                h.face_h[f] = h.vertex_h[node] + cons[ci].drop;
                queue.push_back({'f', f});
            }
        }
    }
    for (int f = 0; f < NF + NB; ++f)
        if (!fset[f] && !by_face[f].empty())
            throw InconsistentField("constraint graph is disconnected");
    for (int v = 0; v < NV; ++v)
        if (!vset[v]) throw InconsistentField("vertex not reached by any face");

    for (const Constraint& c : cons)
        h.closure_residual = std::max(
            h.closure_residual, std::abs(h.face_h[c.face] - h.vertex_h[c.vertex] - c.drop));
    for (int f = NF; f < NF + NB; ++f)
        if (!by_face[f].empty())
            h.boundary_residual = std::max(h.boundary_residual, std::abs(h.face_h[f]));
    if (h.closure_residual > tol)
        throw InconsistentField("increment law fails to close: residual " +
                                std::to_string(h.closure_residual));
    return h;
}

LaplacianReport laplacian_report(const HField& h, const DiscreteDomain& dom,
                                 const MarkedConfig& cfg, double tol) {
    LaplacianReport rep;
    std::unordered_map<Coord, char, CoordHash> marked;
    marked[cfg.a] = 1;
    for (Coord b : cfg.branches) marked[b] = 1;

    for (Coord f : dom.faces()) {
        if (marked.count(f)) continue;
        double lap = 0;
        for (Coord g : face_neighbors(f)) lap += h.face(dom, g) - h.face(dom, f);
        if (lap < -tol) {
            rep.face_violations.push_back(f);
            rep.worst_face = std::min(rep.worst_face, lap);
        }
    }

    Coord excluded{cfg.a.x + 2, cfg.a.y};  // a + delta
    for (Coord v : dom.int_vertices()) {
        if (v == excluded) continue;
        double lap = 0;
        for (Coord w : vertex_neighbors(v)) {
            double c = dom.has_int_vertex(w) ? 1.0 : kBoundaryConductance;
            lap += c * (h.vertex(dom, w) - h.vertex(dom, v));
        }
        if (lap > tol) {
            rep.vertex_violations.push_back(v);
            rep.worst_vertex = std::max(rep.worst_vertex, lap);
        }
        bool near_boundary = false;
        for (Coord w : vertex_neighbors(v)) near_boundary |= !dom.has_int_vertex(w);
        if (near_boundary && h.vertex(dom, v) > tol) rep.normal_violations.push_back(v);
    }
    return rep;
}

}  // namespace spinorlab
