#include "spinorlab/identities.hpp"

#include <cmath>

namespace spinorlab {

namespace {

// E+[prod sigma] where marked faces outside the interior count as frozen +.
double plus_expectation(const DiscreteDomain& dom, std::vector<Coord> marked, int cap) {
    std::vector<Coord> inside;
    for (Coord m : marked) {
        if (!dom.has_face(m)) continue;  // exterior face: sigma = +1
        bool dup = false;
        for (size_t i = 0; i < inside.size(); ++i)
            if (inside[i] == m) {
                inside.erase(inside.begin() + long(i));
                dup = true;  // sigma^2 = 1
                break;
            }
        if (!dup) inside.push_back(m);
    }
    return enumerate_correlation(dom, BoundaryCond::PlusFaces, inside, cap).value;
}

}  // namespace

int source_sheet_sign(const MarkedConfig& cfg, Coord z) {
    Coord src{cfg.a.x + 1, cfg.a.y};
    return cfg.segment_parity(src, z);
}

RatioResiduals check_ratio_identities(const DiscreteDomain& dom, const MarkedConfig& cfg,
                                      int cap) {
    RatioResiduals out;
    ObservableEnum obs(dom, cfg, cap);
    Coord a = cfg.a;
    std::vector<Coord> marked_rest = cfg.branches;

    // horizontal ratio: E+[s_{a+2d} s_{a1}..] / E+[s_a s_{a1}..] = F(a+3d/2)
    {
        std::vector<Coord> num = marked_rest;
        num.push_back({a.x + 4, a.y});
        std::vector<Coord> den = marked_rest;
        den.push_back(a);
        double ratio = plus_expectation(dom, num, cap) / plus_expectation(dom, den, cap);
        Coord z{a.x + 3, a.y};
        cplx f = obs.value(z) * double(source_sheet_sign(cfg, z));
        out.horizontal = std::abs(f - ratio);
    }

    // dual ratio (one branch point): Efree_vertex[s_{a+d} s_{b+d}] / E+[s_a s_b]
    // equals |F(b+d/2)|; needs the vertex graph within the enumeration cap
    if (cfg.branches.size() == 1 && int(dom.int_vertices().size()) <= cap) {
        Coord b = cfg.branches[0];
        double num = enumerate_correlation(dom, BoundaryCond::FreeVertices,
                                           {{a.x + 2, a.y}, {b.x + 2, b.y}}, cap)
                         .value;
        double den = enumerate_correlation(dom, BoundaryCond::PlusFaces, {a, b}, cap).value;
        cplx f = obs.value({b.x + 1, b.y});
        out.dual = std::max(std::abs(std::abs(f) - num / den),
                            std::abs(std::real(f)));  // value is purely imaginary
    }

    // diagonal ratios: E+[s_{a+(1+-i)d} ..] / E+[s_a ..] = e^{+-i pi/4} F(a+(1+-i/2)d)
    for (int sgn : {+1, -1}) {
        std::vector<Coord> num = marked_rest;
        num.push_back({a.x + 2, a.y + 2 * sgn});
        std::vector<Coord> den = marked_rest;
        den.push_back(a);
        double ratio = plus_expectation(dom, num, cap) / plus_expectation(dom, den, cap);
        Coord z{a.x + 2, a.y + sgn};
        cplx rot{M_SQRT1_2, sgn * M_SQRT1_2};
        cplx f = rot * obs.value(z) * double(source_sheet_sign(cfg, z));
        double err = std::abs(f - ratio);
        (sgn > 0 ? out.diag_plus : out.diag_minus) = err;
    }
    return out;
}

FieldResiduals check_field_relations(const ObservableEnum& obs, const DiscreteDomain& dom) {
    FieldResiduals out;
    const MarkedConfig& cfg = obs.config();
    Coord src{cfg.a.x + 1, cfg.a.y};

    // cache midedge values on the reference sheet
    std::vector<cplx> fm(dom.midedges().size());
    for (size_t i = 0; i < dom.midedges().size(); ++i) fm[i] = obs.value(dom.midedges()[i].pos);

    // corner values equal the projections of both adjacent midedge values
    for (const CornerInfo& c : dom.corners()) {
        if (c.pos == src) continue;
        cplx fc = obs.value(c.pos);
        for (int k = 0; k < 2; ++k) {
            const MidedgeInfo& me = dom.midedges()[c.med[k]];
            double s = cfg.segment_parity(c.pos, me.pos);
            cplx proj = project_line(c.tau, s * fm[c.med[k]]);
            out.shol = std::max(out.shol, std::abs(fc - proj));
            ++out.checks;
        }
    }

    // Im[F sqrt(nu_out)] = 0 on the outward boundary edges
    for (const MidedgeInfo& me : dom.midedges()) {
        if (me.cls != MidedgeClass::Outer) continue;
        auto n = dom.outer_normal(me.pos);
        cplx root = std::sqrt(n.direction);
        out.boundary = std::max(out.boundary,
                                std::abs(std::imag(fm[dom.midedge_index(me.pos)] * root)));
        ++out.checks;
    }

    // source singularity: P_{iR}[F(a+(1+-i)d/2)] = -+i on the source sheet
    for (int sgn : {+1, -1}) {
        Coord z{cfg.a.x + 1, cfg.a.y + sgn};
        cplx f = obs.value(z) * double(source_sheet_sign(cfg, z));
        cplx proj = project_line(CornerType::I, f);
        out.singularity = std::max(out.singularity, std::abs(proj - cplx{0.0, double(-sgn)}));
        ++out.checks;
    }
    return out;
}

}  // namespace spinorlab
