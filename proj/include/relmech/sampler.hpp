#pragma once

/// Deterministic tangent-state sampling for contact checks and report
/// reproducibility.  Draws map the raw mt19937_64 stream to doubles directly
/// so a seed yields identical states on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "relmech/geometry.hpp"

namespace relmech {

/// Samples coordinates uniformly from a box and velocities uniformly from
/// [-1, 1]^n, rejecting states with |qdot| < 1e-6: contact behaviour is
/// defined off the zero section, so near-zero velocities carry no signal.
class StateSampler {
public:
    StateSampler(std::vector<double> q_lo, std::vector<double> q_hi, std::uint64_t seed);

    /// Box [-1, 1]^n with the given seed.
    static StateSampler unit_box(int n, std::uint64_t seed);

    int dimension() const { return static_cast<int>(q_lo_.size()); }
    std::uint64_t seed() const { return seed_; }

    TangentState sample(std::mt19937_64& rng) const;

    /// A fresh generator positioned at this sampler's seed.
    std::mt19937_64 make_rng() const { return std::mt19937_64(seed_); }

private:
    std::vector<double> q_lo_, q_hi_;
    std::uint64_t seed_;
};

} // namespace relmech
