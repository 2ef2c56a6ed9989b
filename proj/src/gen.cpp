#include "levelcs/gen.hpp"

#include <cmath>
#include <stdexcept>

namespace levelcs {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t z) {
    std::uint64_t state = z;
    return splitmix64_next(state);
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256ss::Xoshiro256ss(Seed seed) {
    std::uint64_t sm = seed.value;
    for (auto& word : state_) word = splitmix64_next(sm);
    if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0) state_[0] = 1;
}

std::uint64_t Xoshiro256ss::next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double GaussianSampler::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = rng_.uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = rng_.uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return radius * std::cos(kTwoPi * u2);
}

DenseMatrix gaussian_matrix(int rows, int cols, Seed seed) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("gaussian_matrix: dimensions must be >= 1");
    GaussianSampler sampler(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
    DenseMatrix A(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) A(i, j) = sampler.next() * scale;
    return A;
}

DenseVector gaussian_vector(int dim, double sigma, Seed seed) {
    GaussianSampler sampler(seed);
    DenseVector out(dim, 0.0);
    for (int i = 0; i < dim; ++i) out[i] = sampler.next() * sigma;
    return out;
}

DenseVector random_levels_signal(const LevelStructure& ls, Seed seed) {
    GaussianSampler sampler(seed);
    DenseVector v(ls.dim(), 0.0);
    for (int i = 0; i < v.dim(); ++i) v[i] = sampler.next();
    return hard_threshold(v, ls);
}

Seed derive_trial_seed(Seed base, std::uint64_t trial_index, const std::string& cell_tag) {
    std::uint64_t mixed = mix64(base.value ^ fnv1a64(cell_tag));
    mixed = mix64(mixed ^ trial_index);
    return Seed{mixed};
}

}  // namespace levelcs
