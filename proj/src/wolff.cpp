#include "spinorlab/wolff.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <fstream>
#include <thread>

namespace spinorlab {

namespace {

struct SiteGraph {
    int n = 0;
    std::vector<int> nbr;        // flattened adjacency
    std::vector<int> nbr_start;  // n + 1 offsets
    std::vector<int> ghost_bonds;  // frozen + bonds per site (plus bc only)
    std::vector<Coord> pos;
};

SiteGraph build_sites(const DiscreteDomain& dom, BoundaryCond bc) {
    SiteGraph g;
    if (bc == BoundaryCond::FreeVertices) {
        g.n = int(dom.int_vertices().size());
        g.pos = dom.int_vertices();
        std::vector<std::vector<int>> adj(g.n);
        for (int e = 0; e < dom.side_edge_count(); ++e) {
            const MidedgeInfo& me = dom.midedges()[e];
            int u = dom.vertex_index(me.v1), v = dom.vertex_index(me.v2);
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        g.ghost_bonds.assign(g.n, 0);
        g.nbr_start.resize(g.n + 1, 0);
        for (int i = 0; i < g.n; ++i) g.nbr_start[i + 1] = g.nbr_start[i] + int(adj[i].size());
        g.nbr.reserve(g.nbr_start[g.n]);
        for (auto& a : adj) g.nbr.insert(g.nbr.end(), a.begin(), a.end());
        return g;
    }
    g.n = dom.face_count();
    g.pos = dom.faces();
    g.ghost_bonds.assign(g.n, 0);
    std::vector<std::vector<int>> adj(g.n);
    for (int i = 0; i < g.n; ++i) {
        for (int s = 0; s < 4; ++s) {
            int j = dom.face_neighbor(i, s);
            if (j >= 0) adj[i].push_back(j);
        }
        if (bc == BoundaryCond::PlusFaces) g.ghost_bonds[i] = dom.exterior_sides(i);
    }
    g.nbr_start.resize(g.n + 1, 0);
    for (int i = 0; i < g.n; ++i) g.nbr_start[i + 1] = g.nbr_start[i] + int(adj[i].size());
    for (auto& a : adj) g.nbr.insert(g.nbr.end(), a.begin(), a.end());
    return g;
}

struct ChainResult {
    std::vector<std::vector<double>> batch_means;  // per observable
};

struct Dsu {
    std::vector<int> parent;
    void reset(int n) {
        parent.resize(size_t(n));
        for (int i = 0; i < n; ++i) parent[size_t(i)] = i;
    }
    int find(int v) {
        while (parent[size_t(v)] != v) {
            parent[size_t(v)] = parent[size_t(parent[size_t(v)])];
            v = parent[size_t(v)];
        }
        return v;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[size_t(a)] = b;
    }
};

// Full-sweep chain: every aligned bond opens with probability p, unwired
// clusters flip with probability 1/2, and the sweep's clusters provide the
// connectivity observables directly.
ChainResult run_chain_sweep(const SiteGraph& g,
                            const std::vector<std::vector<int>>& marked_sets, const McRun& run,
                            int chain, Estimator est) {
    const double p_add = 1.0 - std::exp(-2.0 * weights::beta_c);
    std::vector<int8_t> spin(size_t(g.n), 1);
    Dsu dsu;
    std::vector<char> wired(size_t(g.n), 0);
    std::vector<int8_t> flip(size_t(g.n), 0);

    long total = run.n_therm + run.n_clusters;
    long per_batch = std::max<long>(1, run.n_clusters / run.n_batches);
    ChainResult out;
    out.batch_means.resize(marked_sets.size());
    std::vector<double> batch_acc(marked_sets.size(), 0.0);
    long batch_n = 0;

    for (long step = 0; step < total; ++step) {
        uint64_t draw = 0;
        auto u01 = [&] { return counter_uniform(run.seed, uint64_t(chain), uint64_t(step), draw++); };
        dsu.reset(g.n);
        std::fill(wired.begin(), wired.end(), 0);
        for (int v = 0; v < g.n; ++v) {
            for (int k = g.nbr_start[v]; k < g.nbr_start[v + 1]; ++k) {
                int w = g.nbr[k];
                if (w < v) continue;  // each bond once
                if (spin[size_t(w)] != spin[size_t(v)]) continue;
                if (u01() < p_add) dsu.unite(v, w);
            }
            if (spin[size_t(v)] == 1)
                for (int b = 0; b < g.ghost_bonds[v]; ++b)
                    if (u01() < p_add) {
                        wired[size_t(v)] = 1;
                        break;
                    }
        }
        std::vector<char> root_wired(size_t(g.n), 0);
        for (int v = 0; v < g.n; ++v)
            if (wired[size_t(v)]) root_wired[size_t(dsu.find(v))] = 1;

        if (step >= run.n_therm) {
            for (size_t o = 0; o < marked_sets.size(); ++o) {
                const auto& ms = marked_sets[o];
                double val;
                if (est == Estimator::Connectivity) {
                    if (ms.size() == 1) {
                        val = root_wired[size_t(dsu.find(ms[0]))] ? 1.0 : 0.0;
                    } else if (ms.size() == 2) {
                        int ra = dsu.find(ms[0]), rb = dsu.find(ms[1]);
                        val = (ra == rb || (root_wired[size_t(ra)] && root_wired[size_t(rb)]))
                                  ? 1.0
                                  : 0.0;
                    } else {
                        throw InvalidSite("connectivity estimator covers one or two sites");
                    }
                } else {
                    int prod = 1;
                    for (int m : ms) prod *= spin[size_t(m)];
                    val = prod;
                }
                batch_acc[o] += val;
            }
            if (++batch_n == per_batch) {
                for (size_t o = 0; o < marked_sets.size(); ++o) {
                    out.batch_means[o].push_back(batch_acc[o] / double(batch_n));
                    batch_acc[o] = 0.0;
                }
                batch_n = 0;
            }
        }

        // flip unwired clusters; wired ones hold the boundary value
        for (int v = 0; v < g.n; ++v) {
            int r = dsu.find(v);
            if (v == r) flip[size_t(v)] = root_wired[size_t(r)] ? 0 : int8_t(u01() < 0.5);
        }
        for (int v = 0; v < g.n; ++v)
            if (flip[size_t(dsu.find(v))]) spin[size_t(v)] = int8_t(-spin[size_t(v)]);
    }
    return out;
}

ChainResult run_chain(const SiteGraph& g, const std::vector<std::vector<int>>& marked_sets,
                      const McRun& run, int chain, Estimator est) {
    const double p_add = 1.0 - std::exp(-2.0 * weights::beta_c);
    std::vector<int8_t> spin(size_t(g.n), 1);
    std::vector<char> in_cluster(size_t(g.n), 0);
    std::vector<int> stack, cluster;

    // fresh aligned-bond cluster from `site`; returns (hit_target, frozen)
    auto grow_probe = [&](int site, int target, auto&& u01) {
        bool frozen = false, hit = false;
        int8_t s0 = spin[size_t(site)];
        stack.assign(1, site);
        cluster.assign(1, site);
        in_cluster[size_t(site)] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v == target) hit = true;
            for (int k = g.nbr_start[v]; k < g.nbr_start[v + 1]; ++k) {
                int w = g.nbr[k];
                if (in_cluster[size_t(w)] || spin[size_t(w)] != s0) continue;
                if (u01() < p_add) {
                    in_cluster[size_t(w)] = 1;
                    cluster.push_back(w);
                    stack.push_back(w);
                }
            }
            if (!frozen && s0 == 1 && g.ghost_bonds[v] > 0)
                for (int b = 0; b < g.ghost_bonds[v]; ++b)
                    if (u01() < p_add) {
                        frozen = true;
                        break;
                    }
        }
        for (int v : cluster) in_cluster[size_t(v)] = 0;
        return std::pair{hit, frozen};
    };

    long total = run.n_therm + run.n_clusters;
    long per_batch = std::max<long>(1, run.n_clusters / run.n_batches);
    ChainResult out;
    out.batch_means.resize(marked_sets.size());
    std::vector<double> batch_acc(marked_sets.size(), 0.0);
    long batch_n = 0;

    for (long step = 0; step < total; ++step) {
        uint64_t draw = 0;
        auto u01 = [&] { return counter_uniform(run.seed, uint64_t(chain), uint64_t(step), draw++); };
        int seed_site = int(u01() * g.n);
        if (seed_site >= g.n) seed_site = g.n - 1;
        int8_t s0 = spin[size_t(seed_site)];
        bool frozen = false;
        stack.assign(1, seed_site);
        cluster.assign(1, seed_site);
        in_cluster[size_t(seed_site)] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int k = g.nbr_start[v]; k < g.nbr_start[v + 1]; ++k) {
                int w = g.nbr[k];
                if (in_cluster[size_t(w)] || spin[size_t(w)] != s0) continue;
                if (u01() < p_add) {
                    in_cluster[size_t(w)] = 1;
                    cluster.push_back(w);
                    stack.push_back(w);
                }
            }
            // bonds to the frozen exterior: joining one freezes the cluster
            if (!frozen && s0 == 1 && g.ghost_bonds[v] > 0) {
                for (int b = 0; b < g.ghost_bonds[v]; ++b)
                    if (u01() < p_add) {
                        frozen = true;
                        break;
                    }
            }
        }
        if (!frozen)
            for (int v : cluster) spin[size_t(v)] = int8_t(-s0);
        for (int v : cluster) in_cluster[size_t(v)] = 0;

        if (step >= run.n_therm) {
            for (size_t o = 0; o < marked_sets.size(); ++o) {
                if (est == Estimator::Connectivity) {
                    // indicator that the marked sites are joined by aligned
                    // open bonds (through the frozen exterior when present)
                    const auto& ms = marked_sets[o];
                    double ind = 1.0;
                    if (ms.size() == 1) {
                        ind = grow_probe(ms[0], -1, u01).second ? 1.0 : 0.0;
                    } else if (ms.size() == 2) {
                        auto [hit, frozen] = grow_probe(ms[0], ms[1], u01);
                        if (hit)
                            ind = 1.0;
                        else if (frozen)
                            ind = grow_probe(ms[1], -1, u01).second ? 1.0 : 0.0;
                        else
                            ind = 0.0;
                    } else {
                        throw InvalidSite("connectivity estimator covers one or two sites");
                    }
                    batch_acc[o] += ind;
                    continue;
                }
                int prod = 1;
                for (int m : marked_sets[o]) prod *= spin[size_t(m)];
                batch_acc[o] += prod;
            }
            if (++batch_n == per_batch) {
                for (size_t o = 0; o < marked_sets.size(); ++o) {
                    out.batch_means[o].push_back(batch_acc[o] / double(batch_n));
                    batch_acc[o] = 0.0;
                }
                batch_n = 0;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<Estimate> wolff_estimate_multi(const DiscreteDomain& dom, BoundaryCond bc,
                                           const std::vector<std::vector<Coord>>& marked_sets,
                                           const McRun& run, Estimator est) {
    for (const auto& ms : marked_sets) {
        if (est != Estimator::Connectivity) break;
        if (bc == BoundaryCond::FreeFaces && ms.size() < 2)
            throw InvalidSite("free single spins have no connectivity form");
        if (run.dynamics == Dynamics::SingleCluster && ms.size() != 1)
            throw InvalidSite("single-cluster connectivity probes cover one site");
        if (ms.size() > 2) throw InvalidSite("connectivity estimator covers one or two sites");
    }
    SiteGraph g = build_sites(dom, bc);
    std::vector<std::vector<int>> sets;
    for (const auto& marked : marked_sets) {
        std::vector<int> sites;
        for (Coord m : marked) {
            auto it = std::lower_bound(g.pos.begin(), g.pos.end(), m);
            if (it == g.pos.end() || !(*it == m))
                throw InvalidSite("marked site not in the model");
            sites.push_back(int(it - g.pos.begin()));
        }
        sets.push_back(std::move(sites));
    }

    int hw = run.threads > 0 ? run.threads : int(std::thread::hardware_concurrency());
    hw = std::max(1, hw);
    std::vector<ChainResult> results(size_t(run.n_chains));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < std::min(hw, run.n_chains); ++t)
        pool.emplace_back([&] {
            for (int c = next.fetch_add(1); c < run.n_chains; c = next.fetch_add(1))
                results[size_t(c)] = run.dynamics == Dynamics::FullSweep
                                         ? run_chain_sweep(g, sets, run, c, est)
                                         : run_chain(g, sets, run, c, est);
        });
    for (auto& th : pool) th.join();

    if (!run.trace_csv.empty()) {
        std::ofstream os(run.trace_csv);
        os << "# schema=spinorlab-mc-trace v1\nobservable,chain,batch,mean\n";
        for (size_t o = 0; o < sets.size(); ++o)
            for (int c = 0; c < run.n_chains; ++c) {
                const auto& bm = results[size_t(c)].batch_means[o];
                for (size_t b = 0; b < bm.size(); ++b)
                    os << o << "," << c << "," << b << "," << bm[b] << "\n";
            }
    }

    std::vector<Estimate> out;
    for (size_t o = 0; o < sets.size(); ++o) {
        // fixed-order reduction over chains and batches
        std::vector<double> batches;
        for (const ChainResult& r : results)
            batches.insert(batches.end(), r.batch_means[o].begin(), r.batch_means[o].end());
        size_t nb = batches.size();
        if (nb < 8) throw NotThermalized{};
        double mean = 0;
        for (double b : batches) mean += b;
        mean /= double(nb);
        double var = 0;
        for (double b : batches) var += (b - mean) * (b - mean);
        var /= double(nb - 1);
        double stderr_ = std::sqrt(var / double(nb));
        // autocorrelation guard: pooled pairs should not keep gaining variance
        if (nb >= 32) {
            double var2 = 0, m2 = 0;
            size_t half = nb / 2;
            std::vector<double> paired(half);
            for (size_t i = 0; i < half; ++i)
                paired[i] = 0.5 * (batches[2 * i] + batches[2 * i + 1]);
            for (double b : paired) m2 += b;
            m2 /= double(half);
            for (double b : paired) var2 += (b - m2) * (b - m2);
            var2 /= double(half - 1);
            if (var2 > 3.0 * var) throw NotThermalized{};
        }
        out.push_back({mean, stderr_, Method::MonteCarlo});
    }
    return out;
}

Estimate wolff_estimate(const DiscreteDomain& dom, BoundaryCond bc,
                        const std::vector<Coord>& marked, const McRun& run, Estimator est) {
    return wolff_estimate_multi(dom, bc, {marked}, run, est)[0];
}

}  // namespace spinorlab
