#include "spinorlab/bvp.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <ostream>

namespace spinorlab {

namespace {

struct Row {
    int cols[4];
    double vals[4];
    int n = 0;
    double rhs = 0.0;
    void add(int c, double v) {
        cols[n] = c;
        vals[n++] = v;
    }
};

}  // namespace

CoverField solve_observable(const DiscreteDomain& dom, const MarkedConfig& cfg,
                            const SolveOptions& opts) {
    cfg.validate(dom);
    const int M = int(dom.midedges().size());
    const Coord src{cfg.a.x + 1, cfg.a.y};

    std::vector<Row> rows;
    rows.reserve(dom.corners().size() + M);

    // s-holomorphicity: both adjacent midedges project to the corner value.
    for (const CornerInfo& c : dom.corners()) {
        if (c.pos == src) continue;
        cplx tau = corner_tau(c.tau);
        double ct = std::real(tau), st = std::imag(tau);
        Row r;
        for (int k = 0; k < 2; ++k) {
            const MidedgeInfo& me = dom.midedges()[c.med[k]];
            double s = cfg.segment_parity(c.pos, me.pos) * (k == 0 ? 1.0 : -1.0);
            r.add(2 * c.med[k], s * ct);
            r.add(2 * c.med[k] + 1, s * st);
        }
        rows.push_back(r);
    }

    // boundary condition at the outward edges
    for (int i = 0; i < M; ++i) {
        const MidedgeInfo& me = dom.midedges()[i];
        if (me.cls != MidedgeClass::Outer) continue;
        cplx root = std::sqrt(dom.outer_normal(me.pos).direction);
        Row r;
        r.add(2 * i, std::imag(root));
        r.add(2 * i + 1, std::real(root));
        rows.push_back(r);
    }

    // source singularity: Im[F(a+(1+-i)d/2)] = -+1 on the source sheet
    for (int sgn : {+1, -1}) {
        Coord z{cfg.a.x + 1, cfg.a.y + sgn};
        int mi = dom.midedge_index(z);
        if (mi < 0) throw InvalidSite("source midedge missing");
        double s = cfg.segment_parity(src, z);
        Row r;
        r.add(2 * mi + 1, s);
        r.rhs = -sgn;
        rows.push_back(r);
    }

    if (opts.dump_system) {
        std::ostream& os = *opts.dump_system;
        os << "# spinorlab least-squares system: rows " << rows.size() << " cols " << 2 * M
           << "\n# A entries: row col value; then rhs entries: rhs row value\n";
        for (size_t r = 0; r < rows.size(); ++r)
            for (int k = 0; k < rows[r].n; ++k)
                os << r << " " << rows[r].cols[k] << " " << rows[r].vals[k] << "\n";
        for (size_t r = 0; r < rows.size(); ++r)
            if (rows[r].rhs != 0.0) os << "rhs " << r << " " << rows[r].rhs << "\n";
    }

    Eigen::SparseMatrix<double> A(long(rows.size()), 2 * M);
    {
        std::vector<Eigen::Triplet<double>> trips;
        for (size_t r = 0; r < rows.size(); ++r)
            for (int k = 0; k < rows[r].n; ++k)
                trips.emplace_back(int(r), rows[r].cols[k], rows[r].vals[k]);
        A.setFromTriplets(trips.begin(), trips.end());
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(long(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r) b[long(r)] = rows[r].rhs;
    if (opts.rhs_perturbation != 0.0) {
        uint64_t st = 0x5eed;
        for (long r = 0; r < b.size(); ++r) {
            st = st * 6364136223846793005ULL + 1442695040888963407ULL;
            b[r] += opts.rhs_perturbation * (2.0 * double(st >> 11) * 0x1.0p-53 - 1.0);
        }
    }

    Eigen::SparseMatrix<double> N = Eigen::SparseMatrix<double>(A.transpose()) * A;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(N);
    if (ldlt.info() != Eigen::Success)
        throw SolverDivergence("normal-equation factorization failed");

    Eigen::VectorXd x = ldlt.solve(A.transpose() * b);
    for (int it = 0; it < 2; ++it) {
        Eigen::VectorXd r = b - A * x;
        x += ldlt.solve(A.transpose() * r);
    }
    double residual = (A * x - b).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual)) throw SolverDivergence("non-finite solve");
    if (residual > opts.residual_tol + 2.0 * std::abs(opts.rhs_perturbation))
        throw ResidualTooLarge("least-squares residual " + std::to_string(residual));

    int defect = 0;
    {
        Eigen::VectorXd d = ldlt.vectorD();
        double dmax = d.cwiseAbs().maxCoeff();
        for (long i = 0; i < d.size(); ++i)
            if (std::abs(d[i]) < 1e-12 * dmax) ++defect;
    }

    std::vector<cplx> vals(M);
    for (int i = 0; i < M; ++i) vals[i] = {x[2 * i], x[2 * i + 1]};
    return CoverField(dom, cfg, std::move(vals), residual, defect);
}

cplx CoverField::midedge_value(Coord z) const {
    int mi = dom_->midedge_index(z);
    if (mi < 0) throw InvalidSite("midedge not in domain");
    return med_[mi];
}

cplx CoverField::corner_value(Coord c) const {
    int ci = dom_->corner_index(c);
    if (ci < 0) throw InvalidSite("corner not in domain");
    const CornerInfo& info = dom_->corners()[ci];
    const MidedgeInfo& me = dom_->midedges()[info.med[0]];
    double s = cfg_.segment_parity(c, me.pos);
    return project_line(info.tau, s * med_[info.med[0]]);
}

cplx CoverField::value(Coord z) const {
    return classify_point(z) == PointKind::Midedge ? midedge_value(z) : corner_value(z);
}

cplx CoverField::on_source_sheet(Coord z) const {
    Coord src{cfg_.a.x + 1, cfg_.a.y};
    return double(cfg_.segment_parity(src, z)) * value(z);
}

double CoverField::corner_consistency_gap() const {
    Coord src{cfg_.a.x + 1, cfg_.a.y};
    double gap = 0;
    for (const CornerInfo& c : dom_->corners()) {
        if (c.pos == src) continue;
        cplx p[2];
        for (int k = 0; k < 2; ++k) {
            const MidedgeInfo& me = dom_->midedges()[c.med[k]];
            double s = cfg_.segment_parity(c.pos, me.pos);
            p[k] = project_line(c.tau, s * med_[c.med[k]]);
        }
        gap = std::max(gap, std::abs(p[0] - p[1]));
    }
    return gap;
}

ObservableRatios observable_ratios(const CoverField& field) {
    const MarkedConfig& cfg = field.config();
    Coord a = cfg.a;
    ObservableRatios out{};
    out.horizontal = std::real(field.on_source_sheet({a.x + 3, a.y}));
    out.diag_plus = cplx{M_SQRT1_2, M_SQRT1_2} * field.on_source_sheet({a.x + 2, a.y + 1});
    out.diag_minus = cplx{M_SQRT1_2, -M_SQRT1_2} * field.on_source_sheet({a.x + 2, a.y - 1});
    if (cfg.branches.size() == 1) {
        Coord b = cfg.branches[0];
        out.branch_value = field.value({b.x + 1, b.y});
    }
    return out;
}

}  // namespace spinorlab
