#pragma once

// Deterministic families of small test domains and marked-point placements
// used by the identity suites and the acceptance runs.

#include <cstdint>
#include <vector>

#include "spinorlab/domain.hpp"

namespace spinorlab {

// Every edge-connected polyomino of up to max_cells faces (translation-
// normalized), skipping the few shapes the domain validator rejects.
std::vector<std::vector<Coord>> polyomino_face_sets(int max_cells);

// Hand-picked larger domains: 3x3, 2x5, 3x4 blocks, a notched 3x4 and a
// 12-face staircase.
std::vector<std::vector<Coord>> curated_large_face_sets();

// Deterministic marking choices with k branch points.  Exhaustive when the
// count does not exceed max_count, otherwise a seeded sample.
std::vector<MarkedConfig> sample_markings(const DiscreteDomain& dom, int k, int max_count,
                                          uint64_t seed);

// Small splittable generator used for deterministic sampling everywhere.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t s) : state(s) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // unbiased enough for test sampling
    uint64_t below(uint64_t n) { return next() % n; }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
};

}  // namespace spinorlab
