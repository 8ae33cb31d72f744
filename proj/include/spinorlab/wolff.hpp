#pragma once

// Single-cluster Monte Carlo sampling of critical correlations on the face or
// vertex models.  Plus boundaries are a frozen ghost layer: bonds to the
// exterior may join the cluster, and a cluster holding a frozen site is never
// flipped.  Randomness is a counter-based generator keyed by
// (seed, chain, step, draw), so estimates are bit-identical for a given seed
// and chain count regardless of scheduling.

#include <string>

#include "spinorlab/ising.hpp"

namespace spinorlab {

struct NotThermalized : DomainError {
    NotThermalized() : DomainError("batch means remain correlated at the largest batch size") {}
};

// How a spin product is measured.  SpinProduct reads the current spins.
// Connectivity reports bond-cluster indicators instead: with single-cluster
// dynamics it grows one fresh probe cluster per measurement (single marked
// site only); with full-sweep dynamics the sweep's own cluster decomposition
// is used, so single sites read the wired indicator and pairs the
// same-cluster indicator, all from one consistent bond realization.
enum class Estimator { SpinProduct, Connectivity };

// SingleCluster is the usual one-cluster-per-step update.  FullSweep builds
// every bond cluster and flips each unwired one with probability 1/2; under
// frozen boundaries it decorrelates pinned observables orders of magnitude
// faster.
enum class Dynamics { SingleCluster, FullSweep };

struct McRun {
    uint64_t seed = 1;
    long n_therm = 2000;      // discarded cluster updates per chain
    long n_clusters = 100000; // measured cluster updates per chain
    int n_chains = 8;
    int n_batches = 64;       // per chain, for the error estimate
    int threads = 0;          // 0: hardware default
    Dynamics dynamics = Dynamics::SingleCluster;
    std::string trace_csv;    // when set, batch means are written here
};

Estimate wolff_estimate(const DiscreteDomain& dom, BoundaryCond bc,
                        const std::vector<Coord>& marked, const McRun& run,
                        Estimator est = Estimator::SpinProduct);

// Several spin products measured on the same chains.
std::vector<Estimate> wolff_estimate_multi(const DiscreteDomain& dom, BoundaryCond bc,
                                           const std::vector<std::vector<Coord>>& marked_sets,
                                           const McRun& run,
                                           Estimator est = Estimator::SpinProduct);

// Counter-based splittable generator.
inline uint64_t counter_hash(uint64_t seed, uint64_t chain, uint64_t step, uint64_t draw) {
    uint64_t z = seed;
    for (uint64_t w : {chain + 0x9e3779b97f4a7c15ULL, step + 0xbf58476d1ce4e5b9ULL,
                       draw + 0x94d049bb133111ebULL}) {
        z += w;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
    }
    return z;
}

inline double counter_uniform(uint64_t seed, uint64_t chain, uint64_t step, uint64_t draw) {
    return double(counter_hash(seed, chain, step, draw) >> 11) * 0x1.0p-53;
}

}  // namespace spinorlab
