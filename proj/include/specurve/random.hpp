#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace specurve {

// Every stochastic stage draws from its own stream so results do not depend on
// which worker runs which task.
enum class Stream : std::uint64_t {
    folds = 1,
    bootstrap = 2,
    null_bootstrap = 3,
    subsample_y = 4,
    subsample_z = 5,
    shap_split = 6,
    synthetic = 7,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for task `index` of `stream` under the master seed.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) noexcept;

/// mt19937_64 is fully specified by the standard; distributions are not, so
/// the helpers below are hand-written to keep output identical across libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal via Box-Muller (no cached second value).
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> permutation(std::size_t n, Rng& rng);

/// n indices in [0, n) drawn with replacement.
std::vector<std::size_t> resample_indices(std::size_t n, Rng& rng);

/// k distinct values from [0, n), returned sorted ascending.
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k, Rng& rng);

}  // namespace specurve
