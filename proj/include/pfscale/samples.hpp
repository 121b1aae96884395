#pragma once

#include <cstdint>
#include <random>

#include "pfscale/grid.hpp"

namespace pfscale {

/// Seeded generators for the randomized property suites. Everything below is a
/// pure function of the engine state, so a fixed seed reproduces the inputs.
class SampleSource {
public:
    explicit SampleSource(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi);

    /// Few-mode trigonometric polynomial plus a quadratic, normalized to max |g| = 1.
    /// Never affine.
    ScalarField1D smooth_trace(const Grid1D& grid);

    /// Nonnegative smooth bump mixture on the grid.
    ScalarField1D nonnegative(const Grid1D& grid);

private:
    std::mt19937_64 rng_;
};

/// 3t^2 - 2t^3 on [0, 1], rescaled to the grid's interval.
ScalarField1D smoothstep_trace(const Grid1D& grid);

}  // namespace pfscale
