#include "spinorlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

namespace spinorlab {

namespace {

// Rational form p/q of a mesh size for the serialization header.
std::pair<long, long> to_rational(double delta) {
    for (long q = 1; q <= 1'000'000; ++q) {
        double p = delta * q;
        double r = std::round(p);
        if (r >= 1.0 && std::abs(p - r) < 1e-12 * q) return {long(r), q};
    }
    throw FormatError("mesh size has no small rational form");
}

}  // namespace

DiscreteDomain DiscreteDomain::build(std::vector<Coord> faces) {
    if (faces.empty()) throw EmptyDomain{};
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());

    DiscreteDomain d;
    d.faces_ = std::move(faces);
    for (int i = 0; i < int(d.faces_.size()); ++i) {
        if (!is_face(d.faces_[i])) throw InvalidSite("not a face coordinate");
        d.face_index_.emplace(d.faces_[i], i);
    }

    // Edge-connectivity of the face set.
    {
        std::vector<char> seen(d.faces_.size(), 0);
        std::deque<int> q{0};
        seen[0] = 1;
        int n = 1;
        while (!q.empty()) {
            Coord f = d.faces_[q.front()];
            q.pop_front();
            for (Coord g : face_neighbors(f)) {
                auto it = d.face_index_.find(g);
                if (it != d.face_index_.end() && !seen[it->second]) {
                    seen[it->second] = 1;
                    ++n;
                    q.push_back(it->second);
                }
            }
        }
        if (n != int(d.faces_.size())) throw Disconnected{};
    }

    // Hole detection: flood the complement of the face set inside a margin
    // box; any unreached complement face sits in a hole.
    {
        int xmin = d.faces_[0].x, xmax = xmin, ymin = d.faces_[0].y, ymax = ymin;
        for (Coord f : d.faces_) {
            xmin = std::min(xmin, f.x); xmax = std::max(xmax, f.x);
            ymin = std::min(ymin, f.y); ymax = std::max(ymax, f.y);
        }
        xmin -= 4; xmax += 4; ymin -= 4; ymax += 4;
        auto in_box = [&](Coord f) {
            return f.x >= xmin && f.x <= xmax && f.y >= ymin && f.y <= ymax;
        };
        std::unordered_set<Coord, CoordHash> visited;
        Coord start{xmin, ymin};
        while (!is_face(start)) ++start.x;
        std::deque<Coord> q{start};
        visited.insert(start);
        while (!q.empty()) {
            Coord f = q.front();
            q.pop_front();
            for (Coord g : face_neighbors(f)) {
                if (!in_box(g) || d.face_index_.count(g) || visited.count(g)) continue;
                visited.insert(g);
                q.push_back(g);
            }
        }
        size_t box_faces = 0;
        for (int y = ymin; y <= ymax; ++y)
            for (int x = xmin; x <= xmax; ++x)
                if (is_face({x, y})) ++box_faces;
        if (visited.size() + d.faces_.size() != box_faces) throw NotSimplyConnected{};
    }

    // Interior vertices.
    for (Coord f : d.faces_)
        for (Coord v : face_vertices(f))
            if (!d.vertex_index_.count(v)) d.vertex_index_.emplace(v, 0);
    for (auto& [v, idx] : d.vertex_index_) d.int_vertices_.push_back(v);
    std::sort(d.int_vertices_.begin(), d.int_vertices_.end());
    for (int i = 0; i < int(d.int_vertices_.size()); ++i)
        d.vertex_index_[d.int_vertices_[i]] = i;

    // Boundary faces and boundary vertices.
    {
        std::unordered_set<Coord, CoordHash> bf;
        for (Coord f : d.faces_)
            for (Coord g : face_neighbors(f))
                if (!d.face_index_.count(g)) bf.insert(g);
        d.boundary_faces_.assign(bf.begin(), bf.end());
        std::sort(d.boundary_faces_.begin(), d.boundary_faces_.end());
        std::unordered_set<Coord, CoordHash> bv;
        for (Coord f : d.boundary_faces_)
            for (Coord v : face_vertices(f))
                if (!d.vertex_index_.count(v)) bv.insert(v);
        d.boundary_vertices_.assign(bv.begin(), bv.end());
        std::sort(d.boundary_vertices_.begin(), d.boundary_vertices_.end());
    }

    // Edges incident to interior vertices, classified by the number of
    // interior faces they flank.  An edge flanked by no interior face whose
    // endpoints are both interior vertices is a single-face-wide fiord.
    {
        std::vector<MidedgeInfo> side, outer;
        std::unordered_set<Coord, CoordHash> seen;
        for (Coord v : d.int_vertices_) {
            for (Coord w : vertex_neighbors(v)) {
                Coord m{(v.x + w.x) / 2, (v.y + w.y) / 2};
                if (seen.count(m)) continue;
                seen.insert(m);
                auto [g1, g2] = midedge_faces(m);
                int n_int = int(d.face_index_.count(g1)) + int(d.face_index_.count(g2));
                MidedgeInfo info;
                info.pos = m;
                info.f1 = d.face_index_.count(g1) ? d.face_index_.at(g1) : -1;
                info.f2 = d.face_index_.count(g2) ? d.face_index_.at(g2) : -1;
                auto [va, vb] = midedge_vertices(m);
                bool a_in = d.vertex_index_.count(va), b_in = d.vertex_index_.count(vb);
                if (n_int == 0) {
                    if (a_in && b_in) throw FiordViolation{};
                    info.cls = MidedgeClass::Outer;
                    info.v1 = a_in ? va : vb;
                    info.v2 = a_in ? vb : va;
                    outer.push_back(info);
                } else {
                    info.cls = n_int == 2 ? MidedgeClass::Interior : MidedgeClass::Boundary;
                    info.v1 = va;
                    info.v2 = vb;
                    side.push_back(info);
                }
            }
        }
        auto by_pos = [](const MidedgeInfo& a, const MidedgeInfo& b) { return a.pos < b.pos; };
        std::sort(side.begin(), side.end(), by_pos);
        std::sort(outer.begin(), outer.end(), by_pos);
        d.n_side_edges_ = int(side.size());
        d.midedges_ = std::move(side);
        d.midedges_.insert(d.midedges_.end(), outer.begin(), outer.end());
        for (int i = 0; i < int(d.midedges_.size()); ++i)
            d.midedge_index_.emplace(d.midedges_[i].pos, i);
    }

    // Corners adjacent to interior vertices.  Every edge at an interior
    // vertex is present above, so each corner has both midedge neighbors.
    {
        std::unordered_set<Coord, CoordHash> seen;
        for (Coord v : d.int_vertices_)
            for (Coord c : vertex_corners(v)) seen.insert(c);
        std::vector<Coord> cs(seen.begin(), seen.end());
        std::sort(cs.begin(), cs.end());
        for (Coord c : cs) {
            CornerInfo info;
            info.pos = c;
            info.tau = corner_type(c);
            info.vertex = corner_vertex(c);
            auto [m1, m2] = corner_midedges(c);
            info.med[0] = d.midedge_index(m1);
            info.med[1] = d.midedge_index(m2);
            if (info.med[0] < 0 || info.med[1] < 0)
                throw DomainError("corner misses an adjacent midedge");
            d.corner_index_.emplace(c, int(d.corners_.size()));
            d.corners_.push_back(info);
        }
    }

    // Face adjacency table and exterior side counts for the spin engines.
    d.face_nbr_.resize(d.faces_.size());
    d.ext_sides_.resize(d.faces_.size());
    for (int i = 0; i < int(d.faces_.size()); ++i) {
        auto nb = face_neighbors(d.faces_[i]);
        int ext = 0;
        for (int s = 0; s < 4; ++s) {
            auto it = d.face_index_.find(nb[s]);
            d.face_nbr_[i][s] = it == d.face_index_.end() ? -1 : it->second;
            if (d.face_nbr_[i][s] < 0) ++ext;
        }
        d.ext_sides_[i] = ext;
    }

    // Vertex graph over side edges, slots ordered NE, NW, SW, SE.
    d.vertex_adj_.assign(d.int_vertices_.size(), {-1, -1, -1, -1});
    for (int i = 0; i < int(d.int_vertices_.size()); ++i) {
        Coord v = d.int_vertices_[i];
        auto nb = vertex_neighbors(v);
        for (int s = 0; s < 4; ++s) {
            auto it = d.vertex_index_.find(nb[s]);
            if (it == d.vertex_index_.end()) continue;
            Coord m{(v.x + nb[s].x) / 2, (v.y + nb[s].y) / 2};
            int mi = d.midedge_index(m);
            if (mi >= 0 && mi < d.n_side_edges_) d.vertex_adj_[i][s] = it->second;
        }
    }
    return d;
}

DiscreteDomain DiscreteDomain::disc(double radius, double delta) {
    if (radius <= 0 || delta <= 0) throw EmptyDomain{};
    double r_units = 2.0 * radius / delta;
    int lim = int(std::ceil(r_units)) + 2;
    std::vector<Coord> faces;
    for (int y = -lim; y <= lim; ++y)
        for (int x = -lim; x <= lim; ++x)
            if (is_face({x, y}) && double(x) * x + double(y) * y <= r_units * r_units)
                faces.push_back({x, y});
    if (faces.empty()) throw EmptyDomain{};
    return build(std::move(faces));
}

DiscreteDomain DiscreteDomain::rectangle(int m, int n) {
    if (m <= 0 || n <= 0) throw EmptyDomain{};
    std::vector<Coord> faces;
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < n; ++q) faces.push_back({2 * p + 2 * q, 2 + 2 * p - 2 * q});
    return build(std::move(faces));
}

int DiscreteDomain::face_index(Coord f) const {
    auto it = face_index_.find(f);
    if (it == face_index_.end()) throw InvalidSite("face not in domain");
    return it->second;
}

int DiscreteDomain::vertex_index(Coord v) const {
    auto it = vertex_index_.find(v);
    if (it == vertex_index_.end()) throw InvalidSite("vertex not in domain");
    return it->second;
}

int DiscreteDomain::midedge_index(Coord m) const {
    auto it = midedge_index_.find(m);
    return it == midedge_index_.end() ? -1 : it->second;
}

int DiscreteDomain::corner_index(Coord c) const {
    auto it = corner_index_.find(c);
    return it == corner_index_.end() ? -1 : it->second;
}

int DiscreteDomain::edge_between(Coord u, Coord v) const {
    Coord m{(u.x + v.x) / 2, (u.y + v.y) / 2};
    int mi = midedge_index(m);
    return (mi >= 0 && mi < n_side_edges_) ? mi : -1;
}

BoundaryNormal DiscreteDomain::outer_normal(Coord midedge) const {
    int mi = midedge_index(midedge);
    if (mi < 0 || midedges_[mi].cls != MidedgeClass::Outer)
        throw InvalidSite("not an outer boundary midedge");
    const MidedgeInfo& e = midedges_[mi];
    auto int_faces_at = [&](Coord v) {
        int n = 0;
        for (Coord f : vertex_faces(v)) n += int(face_index_.count(f));
        return n;
    };
    int n1 = int_faces_at(e.v1), n2 = int_faces_at(e.v2);
    if (n1 == n2) throw AmbiguousNormal{};
    Coord from = n1 > n2 ? e.v1 : e.v2;
    Coord to = n1 > n2 ? e.v2 : e.v1;
    const double r = 0.7071067811865475244;
    return {midedge, cplx{r * (to.x - from.x) / 2.0, r * (to.y - from.y) / 2.0}};
}

void DiscreteDomain::serialize(std::ostream& os, double delta) const {
    auto [p, q] = to_rational(delta);
    os << "format=spinorlab-domain v1 delta=" << p << "/" << q << "\n";
    for (Coord f : faces_) os << f.x << " " << f.y << "\n";
}

std::pair<DiscreteDomain, double> DiscreteDomain::deserialize(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw FormatError("missing header");
    long p = 0, q = 0;
    if (std::sscanf(header.c_str(), "format=spinorlab-domain v1 delta=%ld/%ld", &p, &q) != 2 ||
        p <= 0 || q <= 0)
        throw FormatError("bad header: " + header);
    std::vector<Coord> faces;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        Coord f;
        if (!(ls >> f.x >> f.y)) throw FormatError("bad face line: " + line);
        faces.push_back(f);
    }
    return {build(std::move(faces)), double(p) / double(q)};
}

void MarkedConfig::validate(const DiscreteDomain& dom) const {
    if (!dom.has_face(a)) throw InvalidSite("source face not in domain");
    for (size_t i = 0; i < branches.size(); ++i) {
        if (!dom.has_face(branches[i])) throw InvalidSite("branch face not in domain");
        if (branches[i] == a) throw InvalidSite("branch face equals source");
        for (size_t j = i + 1; j < branches.size(); ++j)
            if (branches[i] == branches[j]) throw InvalidSite("duplicate branch face");
    }
}

int MarkedConfig::segment_parity(Coord p, Coord q) const {
    int s = 1;
    if (segment_crosses_cut(p, q, a)) s = -s;
    for (Coord b : branches)
        if (segment_crosses_cut(p, q, b)) s = -s;
    return s;
}

int MarkedConfig::crossing_parity(const std::vector<Coord>& path) const {
    int s = 1;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        Coord p = path[i], q = path[i + 1];
        int dx = q.x - p.x, dy = q.y - p.y;
        if ((dx == 0 && dy == 0) || dx * dx + dy * dy > 8) throw NonAdjacentStep{};
        s *= segment_parity(p, q);
    }
    return s;
}

}  // namespace spinorlab
