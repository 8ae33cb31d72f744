#include "spinorlab/observable.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

namespace spinorlab {

namespace {

constexpr int kMaxMarked = 8;

// exp(-i pi t / 8) for t = 0..15.
std::array<cplx, 16> unit_phases() {
    std::array<cplx, 16> u;
    for (int t = 0; t < 16; ++t) {
        double th = -M_PI * t / 8.0;
        u[t] = {std::cos(th), std::sin(th)};
    }
    return u;
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

struct Passage {
    int8_t dir = 0;
    int8_t kind = 0;  // 0 = full edge, 1 = stub
    bool is_target = false;
    bool used = false;
    int16_t edge = -1;
    int far_vertex = -1;  // for edges
    Coord far{};          // far endpoint (vertex for edges, corner/midedge for stubs)
};

// Re-usable per-thread tracer for the path/loop decomposition of defect
// configurations.
class Tracer {
  public:
    Tracer(const DiscreteDomain& dom, const MarkedConfig& cfg)
        : dom_(dom), cfg_(cfg), slots_(dom.int_vertices().size()),
          count_(dom.int_vertices().size(), 0) {
        marked_.push_back(cfg.a);
        for (Coord b : cfg.branches) marked_.push_back(b);
        if (int(marked_.size()) > kMaxMarked) throw TooLarge{};
    }

    // Runs the decomposition; gamma is the set of full side edges, the two
    // stubs are (source corner, its vertex) and (target_vertex, z).
    DefectPhase trace(const EdgeMask& gamma, Coord src_corner, int src_vertex, Coord z,
                      int target_vertex, PairingRule rule, Decomposition* record) {
        reset();
        int n_edges = 0;
        for (int w = 0; w < 2; ++w) {
            uint64_t bits = gamma.w[w];
            while (bits) {
                int e = 64 * w + __builtin_ctzll(bits);
                bits &= bits - 1;
                add_edge(e);
                ++n_edges;
            }
        }
        int src_slot = add_stub(src_vertex, src_corner, false);
        add_stub(target_vertex, z, true);
        for (int v : touched_) sort_slots(v);

        DefectPhase out;
        out.n_edges = n_edges;

        // Path from the source stub to the target stub.
        {
            int v = src_vertex;
            int slot = find_slot(v, 4, -1);  // source stub always points west
            slots_[v][slot].used = true;
            int motion = 0;  // entering the vertex heading east
            int parity = seg_parity_all(src_corner, dom_.int_vertices()[v]);
            if (record) {
                record->path = {src_corner, dom_.int_vertices()[v]};
            }
            int guard = 2 * n_edges + 4;
            while (guard-- > 0) {
                int p = partner(v, find_sorted(v, (motion + 4) & 7), rule);
                Passage& out_p = slots_[v][p];
                out_p.used = true;
                out.wind45 += turn_octants(motion, out_p.dir);
                parity *= seg_parity_all(dom_.int_vertices()[v], out_p.far);
                if (record) record->path.push_back(out_p.far);
                if (out_p.kind == 1) {
                    if (!out_p.is_target) throw NotADefectConfig("path returned to the source");
                    out.sheet_sign = parity;
                    break;
                }
                int nv = out_p.far_vertex;
                int arr = find_slot(nv, (out_p.dir + 4) & 7, out_p.edge);
                slots_[nv][arr].used = true;
                motion = out_p.dir;
                v = nv;
            }
            if (guard < 0) throw NotADefectConfig("path failed to terminate");
        }

        // Remaining passages decompose into loops.
        for (int v0 : touched_) {
            for (int s0 = 0; s0 < count_[v0]; ++s0) {
                if (slots_[v0][s0].used) continue;
                if (slots_[v0][s0].kind != 0)
                    throw NotADefectConfig("stub left over after the path");
                std::array<int, kMaxMarked> par{};
                if (record) record->loops.emplace_back();
                int v = v0, slot = s0;
                int guard = 2 * n_edges + 4;
                while (guard-- > 0) {
                    Passage& p = slots_[v][slot];
                    p.used = true;
                    Coord from = dom_.int_vertices()[v];
                    for (int j = 0; j < int(marked_.size()); ++j)
                        par[j] ^= int(MarkedConfig::segment_crosses(from, p.far, marked_[j]));
                    if (record) {
                        if (record->loops.back().empty()) record->loops.back().push_back(from);
                        record->loops.back().push_back(p.far);
                    }
                    int nv = p.far_vertex;
                    int arr = find_slot(nv, (p.dir + 4) & 7, p.edge);
                    slots_[nv][arr].used = true;
                    int next = partner(nv, arr, rule);
                    v = nv;
                    slot = next;
                    if (v == v0 && slot == s0) break;
                }
                if (guard < 0) throw NotADefectConfig("loop failed to close");
                int odd = 0;
                for (int j = 0; j < int(marked_.size()); ++j) odd ^= par[j];
                out.odd_loops += odd;
            }
        }
        (void)src_slot;
        if (record) record->phase = out;
        return out;
    }

  private:
    void reset() {
        for (int v : touched_) count_[v] = 0;
        touched_.clear();
    }

    void touch(int v) {
        if (count_[v] == 0) touched_.push_back(v);
    }

    void add_edge(int e) {
        const MidedgeInfo& me = dom_.midedges()[e];
        int a = dom_.vertex_index(me.v1), b = dom_.vertex_index(me.v2);
        touch(a);
        Passage& pa = slots_[a][count_[a]++];
        pa = Passage{int8_t(dir_octant(me.v1, me.v2)), 0, false, false, int16_t(e), b, me.v2};
        touch(b);
        Passage& pb = slots_[b][count_[b]++];
        pb = Passage{int8_t(dir_octant(me.v2, me.v1)), 0, false, false, int16_t(e), a, me.v1};
    }

    int add_stub(int v, Coord far, bool is_target) {
        touch(v);
        int s = count_[v]++;
        slots_[v][s] =
            Passage{int8_t(dir_octant(dom_.int_vertices()[v], far)), 1, is_target, false, -1, -1,
                    far};
        return s;
    }

    void sort_slots(int v) {
        int n = count_[v];
        if (n > 6 || (n & 1)) throw NotADefectConfig("bad passage count at a vertex");
        auto& a = slots_[v];
        for (int i = 1; i < n; ++i)
            for (int j = i; j > 0 && a[j].dir < a[j - 1].dir; --j) std::swap(a[j], a[j - 1]);
    }

    int find_sorted(int v, int dir) const { return find_slot(v, dir, -2); }

    // Find the passage with the given direction (and edge id when >= -1
    // matters: -2 means any).
    int find_slot(int v, int dir, int edge) const {
        for (int i = 0; i < count_[v]; ++i)
            if (slots_[v][i].dir == dir && (edge == -2 || slots_[v][i].edge == edge)) return i;
        throw NotADefectConfig("missing passage");
    }

    int partner(int v, int i, PairingRule rule) const {
        int c = count_[v];
        if (rule == PairingRule::AdjacentLow) return i ^ 1;
        return (i & 1) ? (i + 1) % c : (i - 1 + c) % c;
    }

    int seg_parity_all(Coord p, Coord q) const {
        int s = 1;
        for (Coord m : marked_)
            if (MarkedConfig::segment_crosses(p, q, m)) s = -s;
        return s;
    }

    const DiscreteDomain& dom_;
    const MarkedConfig& cfg_;
    std::vector<Coord> marked_;
    std::vector<std::array<Passage, 6>> slots_;
    std::vector<int> count_;
    std::vector<int> touched_;
};

// Reference path: lexicographic breadth-first walk over the vertex graph.
struct RefPath {
    EdgeMask mask;      // full edges of the walk
    int stub_vertex;    // vertex carrying the target stub
};

RefPath reference_path(const DiscreteDomain& dom, int src_vertex,
                       const std::vector<int>& target_vertices) {
    std::vector<int> parent_edge(dom.int_vertices().size(), -1);
    std::vector<int> parent(dom.int_vertices().size(), -1);
    std::vector<int> dist(dom.int_vertices().size(), -1);
    std::vector<int> queue{src_vertex};
    dist[src_vertex] = 0;
    for (size_t h = 0; h < queue.size(); ++h) {
        int v = queue[h];
        for (int s = 0; s < 4; ++s) {
            int w = dom.vertex_adj()[v][s];
            if (w < 0 || dist[w] >= 0) continue;
            dist[w] = dist[v] + 1;
            parent[w] = v;
            parent_edge[w] =
                dom.edge_between(dom.int_vertices()[v], dom.int_vertices()[w]);
            queue.push_back(w);
        }
    }
    int best = -1;
    for (int t : target_vertices) {
        if (dist[t] < 0) throw NotADefectConfig("target not reachable");
        if (best < 0 || dist[t] < dist[best] ||
            (dist[t] == dist[best] && dom.int_vertices()[t] < dom.int_vertices()[best]))
            best = t;
    }
    RefPath rp;
    rp.stub_vertex = best;
    for (int v = best; parent[v] >= 0; v = parent[v]) rp.mask.flip(parent_edge[v]);
    return rp;
}

struct Target {
    bool midedge = false;
    int edge = -1;       // side-edge index when the midedge can be toggled
    int stub_vertex = -1;
    int other_vertex = -1;  // opposite endpoint for toggled midedges
    RefPath ref;
};

}  // namespace

cplx DefectPhase::phase() const {
    static const std::array<cplx, 16> u = unit_phases();
    int t = ((wind45 % 16) + 16) & 15;
    cplx p = u[t];
    int sign = sheet_sign * ((odd_loops & 1) ? -1 : 1);
    return sign > 0 ? p : -p;
}

ObservableEnum::ObservableEnum(const DiscreteDomain& dom, MarkedConfig cfg, int cap,
                               PairingRule rule)
    : dom_(dom), cfg_(std::move(cfg)), cap_(cap), rule_(rule) {
    cfg_.validate(dom_);
    graph_ = SpinGraph::faces_plus(dom_);
    std::vector<Coord> marked{cfg_.a};
    for (Coord b : cfg_.branches) marked.push_back(b);
    z_signed_ = enumerate_signed(graph_, marked_mask_of(graph_, marked), cap_).signed_;
}

cplx ObservableEnum::value(Coord z) const {
    Coord src_corner{cfg_.a.x + 1, cfg_.a.y};
    Coord src_vertex_c{cfg_.a.x + 2, cfg_.a.y};
    if (z == src_corner) throw SourceCorner{};
    int src_vertex = dom_.vertex_index(src_vertex_c);

    Target tg;
    PointKind kind = classify_point(z);
    if (kind == PointKind::Corner) {
        if (dom_.corner_index(z) < 0) throw InvalidSite("corner not in the observable domain");
        tg.stub_vertex = dom_.vertex_index(corner_vertex(z));
        tg.ref = reference_path(dom_, src_vertex, {tg.stub_vertex});
    } else if (kind == PointKind::Midedge) {
        int mi = dom_.midedge_index(z);
        if (mi < 0) throw InvalidSite("midedge not in the observable domain");
        const MidedgeInfo& me = dom_.midedges()[mi];
        tg.midedge = true;
        std::vector<int> cands;
        if (dom_.has_int_vertex(me.v1)) cands.push_back(dom_.vertex_index(me.v1));
        if (dom_.has_int_vertex(me.v2)) cands.push_back(dom_.vertex_index(me.v2));
        tg.ref = reference_path(dom_, src_vertex, cands);
        tg.stub_vertex = tg.ref.stub_vertex;
        if (mi < dom_.side_edge_count()) {
            tg.edge = mi;
            Coord far = dom_.int_vertices()[tg.stub_vertex] == me.v1 ? me.v2 : me.v1;
            tg.other_vertex = dom_.vertex_index(far);
            if (tg.ref.mask.test(mi))
                throw NotADefectConfig("reference path runs through the target edge");
        }
    } else {
        throw InvalidSite("observable is defined at corners and midedges only");
    }

    if (graph_.n_sites > cap_ || graph_.n_sites > kEnumerationCap) throw TooLarge{};
    std::vector<double> apow(graph_.n_edges + 1);
    apow[0] = 1.0;
    for (int i = 1; i <= graph_.n_edges; ++i) apow[i] = apow[i - 1] * weights::alpha_c;

    auto sweep = [&](int low_bits, uint32_t prefix, std::array<Kahan, 16>& bins) {
        Tracer tracer(dom_, cfg_);
        EdgeMask contour;
        uint32_t neg = prefix << low_bits;
        for (int i = low_bits; i < graph_.n_sites; ++i)
            if ((neg >> i) & 1) contour ^= graph_.incidence[i];
        uint64_t total = uint64_t(1) << low_bits;
        for (uint64_t i = 0;; ++i) {
            EdgeMask gamma = contour ^ tg.ref.mask;
            int stub_v = tg.stub_vertex;
            if (tg.edge >= 0 && gamma.test(tg.edge)) {
                gamma.flip(tg.edge);
                stub_v = tg.other_vertex;
            }
            DefectPhase ph =
                tracer.trace(gamma, src_corner, src_vertex, z, stub_v, rule_, nullptr);
            int sign = ph.sheet_sign * ((ph.odd_loops & 1) ? -1 : 1);
            int bin = (((ph.wind45 % 16) + 16) + (sign < 0 ? 8 : 0)) & 15;
            bins[bin].add(apow[ph.n_edges]);
            if (i + 1 == total) break;
            int b = __builtin_ctzll(i + 1);
            contour ^= graph_.incidence[b];
        }
    };

    std::array<Kahan, 16> bins;
    if (graph_.n_sites < 18) {
        sweep(graph_.n_sites, 0, bins);
    } else {
        const int kPrefix = 2;
        std::array<std::array<Kahan, 16>, 1 << kPrefix> parts;
        std::vector<std::thread> pool;
        for (uint32_t p = 0; p < (1u << kPrefix); ++p)
            pool.emplace_back([&, p] { sweep(graph_.n_sites - kPrefix, p, parts[p]); });
        for (auto& t : pool) t.join();
        for (const auto& part : parts)
            for (int t = 0; t < 16; ++t) bins[t].add(part[t].s);
    }

    static const std::array<cplx, 16> u = unit_phases();
    cplx sum = 0.0;
    for (int t = 0; t < 16; ++t) sum += bins[t].s * u[t];
    sum /= z_signed_;
    if (tg.midedge) sum /= std::cos(M_PI / 8.0);
    return sum;
}

Decomposition ObservableEnum::decompose(const std::vector<Coord>& gamma_edges, Coord z,
                                        PairingRule rule) const {
    Coord src_corner{cfg_.a.x + 1, cfg_.a.y};
    if (z == src_corner) throw SourceCorner{};
    int src_vertex = dom_.vertex_index({cfg_.a.x + 2, cfg_.a.y});
    EdgeMask gamma;
    for (Coord e : gamma_edges) {
        int mi = dom_.midedge_index(e);
        if (mi < 0 || mi >= dom_.side_edge_count())
            throw NotADefectConfig("configuration edge is not a side edge");
        if (gamma.test(mi)) throw NotADefectConfig("duplicate edge");
        gamma.flip(mi);
    }
    int stub_v;
    if (classify_point(z) == PointKind::Corner) {
        stub_v = dom_.vertex_index(corner_vertex(z));
    } else {
        int mi = dom_.midedge_index(z);
        if (mi < 0) throw InvalidSite("midedge not in domain");
        const MidedgeInfo& me = dom_.midedges()[mi];
        if (mi < dom_.side_edge_count() && gamma.test(mi)) {
            gamma.flip(mi);
            stub_v = dom_.vertex_index(me.v2);
        } else {
            stub_v = dom_.vertex_index(dom_.has_int_vertex(me.v1) ? me.v1 : me.v2);
        }
    }
    Decomposition rec;
    Tracer tracer(dom_, cfg_);
    tracer.trace(gamma, src_corner, src_vertex, z, stub_v, rule, &rec);
    return rec;
}

cplx observable_enum(const DiscreteDomain& dom, const MarkedConfig& cfg, Coord z, int cap) {
    return ObservableEnum(dom, cfg, cap).value(z);
}

}  // namespace spinorlab
