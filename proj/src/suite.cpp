#include "spinorlab/suite.hpp"

#include <algorithm>
#include <set>

namespace spinorlab {

namespace {

// Cells live in the face basis: cell (p, q) is the face at
// (2p + 2q, 2 + 2p - 2q); orthogonal cell neighbors share an edge.
Coord cell_to_face(std::pair<int, int> c) {
    return {2 * c.first + 2 * c.second, 2 + 2 * c.first - 2 * c.second};
}

using Cells = std::vector<std::pair<int, int>>;

Cells normalized(Cells c) {
    int pmin = c[0].first, qmin = c[0].second;
    for (auto [p, q] : c) {
        pmin = std::min(pmin, p);
        qmin = std::min(qmin, q);
    }
    for (auto& [p, q] : c) {
        p -= pmin;
        q -= qmin;
    }
    std::sort(c.begin(), c.end());
    return c;
}

std::vector<Coord> to_faces(const Cells& c) {
    std::vector<Coord> out;
    for (auto cell : c) out.push_back(cell_to_face(cell));
    return out;
}

}  // namespace

std::vector<std::vector<Coord>> polyomino_face_sets(int max_cells) {
    std::set<Cells> seen;
    std::vector<Cells> frontier{{{0, 0}}};
    seen.insert(frontier[0]);
    std::vector<std::vector<Coord>> out{to_faces(frontier[0])};
    for (int n = 2; n <= max_cells; ++n) {
        std::vector<Cells> next;
        for (const Cells& c : frontier) {
            std::set<std::pair<int, int>> cs(c.begin(), c.end());
            for (auto [p, q] : c) {
                const std::pair<int, int> nb[4] = {{p + 1, q}, {p - 1, q}, {p, q + 1},
                                                   {p, q - 1}};
                for (auto g : nb) {
                    if (cs.count(g)) continue;
                    Cells grown = c;
                    grown.push_back(g);
                    grown = normalized(grown);
                    if (seen.insert(grown).second) next.push_back(grown);
                }
            }
        }
        for (const Cells& c : next) {
            auto faces = to_faces(c);
            try {
                DiscreteDomain::build(faces);
                out.push_back(faces);
            } catch (const DomainError&) {
                // holes or fiords: not a valid simply-connected domain
            }
        }
        frontier = std::move(next);
    }
    return out;
}

std::vector<std::vector<Coord>> curated_large_face_sets() {
    std::vector<std::vector<Coord>> out;
    auto block = [&](int m, int n) {
        Cells c;
        for (int p = 0; p < m; ++p)
            for (int q = 0; q < n; ++q) c.push_back({p, q});
        return c;
    };
    out.push_back(to_faces(block(3, 3)));
    out.push_back(to_faces(block(2, 5)));
    out.push_back(to_faces(block(3, 4)));
    {
        Cells c = block(3, 4);  // corner-notched block (a depth-one notch in
        // the side would pinch a single-face fiord and is rejected)
        c.erase(std::find(c.begin(), c.end(), std::pair<int, int>{0, 0}));
        out.push_back(to_faces(c));
    }
    {
        Cells c;  // 12-face staircase
        for (int s = 0; s < 6; ++s) {
            c.push_back({s, s});
            c.push_back({s + 1, s});
        }
        out.push_back(to_faces(c));
    }
    return out;
}

std::vector<MarkedConfig> sample_markings(const DiscreteDomain& dom, int k, int max_count,
                                          uint64_t seed) {
    const auto& faces = dom.faces();
    int n = int(faces.size());
    std::vector<MarkedConfig> all;
    if (k == 0) {
        for (Coord a : faces) all.emplace_back(a);
    } else if (k == 1) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) all.emplace_back(faces[i], std::vector<Coord>{faces[j]});
    } else if (k == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = j + 1; l < n; ++l)
                    if (i != j && i != l)
                        all.emplace_back(faces[i], std::vector<Coord>{faces[j], faces[l]});
    } else {
        throw InvalidSite("marking sampler supports k <= 2");
    }
    if (int(all.size()) <= max_count) return all;
    // seeded Fisher-Yates prefix
    SplitMix64 rng(seed ^ (uint64_t(n) << 32) ^ uint64_t(k));
    for (int i = 0; i < max_count; ++i) {
        int j = i + int(rng.below(uint64_t(all.size() - i)));
        std::swap(all[i], all[j]);
    }
    all.resize(max_count);
    return all;
}

}  // namespace spinorlab
