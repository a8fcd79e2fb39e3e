#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ctrain {

/// Mixes (seed, index) into a new seed. Used to derive independent child
/// streams, e.g. one per trial or one per augmentation stage.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Seedable random generator with a fixed draw algorithm for every
/// distribution we use. std::* distributions are implementation-defined,
/// so all transforms are spelled out here to keep runs reproducible
/// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Child generator for stream `index`, independent of draws made so far.
    Rng child(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n). Rejection sampling, unbiased.
    std::uint64_t uniform_index(std::uint64_t n);

    bool bernoulli(double p) { return next_double() < p; }

    /// Fisher-Yates with our own index draws (std::shuffle is unspecified).
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = uniform_index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace ctrain
