#pragma once

// Exact engines for the critical Ising model: full enumeration over spin
// configurations (in contour weights) and the spins <-> contours bijection.
//
// Conventions: the canonical weight of a configuration is alpha_c^{#edges}
// where #edges counts the contour edges separating unlike spins (ferromagnetic
// coupling; for plus boundary conditions the exterior faces are frozen to +).

#include <array>
#include <cstdint>
#include <vector>

#include "spinorlab/domain.hpp"

namespace spinorlab {

namespace weights {
inline constexpr double alpha_c = 0.41421356237309514547;  // sqrt(2) - 1
inline constexpr double beta_c = 0.44068679350977150262;   // ln(sqrt(2)+1) / 2
}  // namespace weights

enum class Method { Enumeration, Transfer, MonteCarlo, Solver };

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;  // 0 for exact methods
    Method method = Method::Enumeration;
};

enum class BoundaryCond { PlusFaces, FreeFaces, FreeVertices };

struct TooLarge : DomainError {
    TooLarge() : DomainError("site count exceeds the enumeration cap") {}
};
struct BadBoundary : DomainError { using DomainError::DomainError; };

// Bitmask over edges; wide enough for domains at the enumeration cap.
struct EdgeMask {
    std::array<uint64_t, 2> w{0, 0};
    void flip(int b) { w[b >> 6] ^= uint64_t(1) << (b & 63); }
    bool test(int b) const { return (w[b >> 6] >> (b & 63)) & 1; }
    void operator^=(const EdgeMask& o) { w[0] ^= o.w[0]; w[1] ^= o.w[1]; }
    int popcount() const {
        return __builtin_popcountll(w[0]) + __builtin_popcountll(w[1]);
    }
    friend EdgeMask operator^(EdgeMask a, const EdgeMask& b) { a ^= b; return a; }
};

// A small spin system prepared for Gray-code enumeration.  Sites are faces or
// vertices depending on the boundary condition; edges are the side edges of
// the domain.  incidence[i] covers every edge whose contour state toggles
// when spin i flips (for plus boundaries this includes the sides facing the
// frozen exterior).
struct SpinGraph {
    int n_sites = 0;
    int n_edges = 0;
    std::vector<EdgeMask> incidence;
    std::vector<Coord> site_pos;

    static SpinGraph faces_plus(const DiscreteDomain& dom);
    static SpinGraph faces_free(const DiscreteDomain& dom);
    static SpinGraph vertices_free(const DiscreteDomain& dom);
};

inline constexpr int kEnumerationCap = 24;

struct SignedSums {
    double z = 0.0;       // sum of alpha^m
    double signed_ = 0.0;  // sum of alpha^m * prod of marked spins
};

// Exact sums over all 2^n spin configurations, Gray-code order with
// compensated accumulation; parallelized over fixed spin prefixes.
SignedSums enumerate_signed(const SpinGraph& g, uint32_t marked_mask, int cap = kEnumerationCap);

// E[prod sigma_marked] under the given boundary condition, exact.
Estimate enumerate_correlation(const DiscreteDomain& dom, BoundaryCond bc,
                               const std::vector<Coord>& marked, int cap = kEnumerationCap);

// Z^+[sigma_a sigma_a1 ...]: the contour sum with loop signs for the marked
// faces; positivity and the identity Z^+[..] = E^+[..] Z^+ are exact.
double signed_partition_sum(const DiscreteDomain& dom, const std::vector<Coord>& marked_faces,
                            int cap = kEnumerationCap);
double partition_sum(const DiscreteDomain& dom, int cap = kEnumerationCap);

// Low-temperature expansion bijection for plus boundary conditions.
struct ContourConfig {
    std::vector<Coord> edges;  // side-edge midpoints, sorted
};
ContourConfig spins_to_contours(const DiscreteDomain& dom, const std::vector<int>& face_spins);
std::vector<int> contours_to_spins(const DiscreteDomain& dom, const ContourConfig& contour);

uint32_t marked_mask_of(const SpinGraph& g, const std::vector<Coord>& marked);

}  // namespace spinorlab
