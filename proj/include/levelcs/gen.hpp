#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "levelcs/dense.hpp"
#include "levelcs/levels.hpp"

namespace levelcs {

/// Seed for the generators below. Identical seeds produce byte-identical
/// artifacts regardless of execution order or parallelism.
struct Seed {
    std::uint64_t value = 0;
    bool operator==(const Seed&) const = default;
};

/// xoshiro256** with splitmix64 state expansion. The PRNG algorithm, the
/// 53-bit uniform mapping and the Box-Muller normal sampler below are fixed
/// as part of the reproducibility contract for generated matrices/signals.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(Seed seed);
    std::uint64_t next();
    /// Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::array<std::uint64_t, 4> state_{};
};

/// Standard normal stream: Box-Muller over Xoshiro256ss, pair-cached.
class GaussianSampler {
public:
    explicit GaussianSampler(Seed seed) : rng_(seed) {}
    double next();

private:
    Xoshiro256ss rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// rows x cols matrix with i.i.d. N(0, 1/rows) entries (std dev 1/sqrt(rows)),
/// filled in row-major order.
DenseMatrix gaussian_matrix(int rows, int cols, Seed seed);

/// i.i.d. N(0, sigma^2) vector.
DenseVector gaussian_vector(int dim, double sigma, Seed seed);

/// Hard threshold of an i.i.d. N(0,1) vector: a random member of the model
/// set with exactly s_k nonzeros per level (almost surely).
DenseVector random_levels_signal(const LevelStructure& ls, Seed seed);

/// Deterministic per-trial seed: splitmix-style avalanche over
/// base ^ hash(cell_tag) then ^ trial_index.
Seed derive_trial_seed(Seed base, std::uint64_t trial_index, const std::string& cell_tag);

}  // namespace levelcs
