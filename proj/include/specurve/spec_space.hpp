#pragma once

#include "specurve/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace specurve {

enum class Estimator { ols, logistic };
enum class OutcomeMode { single_y, multi_y };

const char* to_string(Estimator e) noexcept;
Estimator parse_estimator(const std::string& s);

/// One point of the specification space.
struct Specification {
    std::size_t index = 0;
    std::size_t y_option = 0;      // position in SpecSpace::y_options
    std::uint64_t z_mask = 0;      // bit i set <=> z_pool[i] included
    std::vector<std::string> y_subset;
    std::vector<std::string> z_subset;
    bool has_intercept = true;     // resolved when the design is built

    bool operator==(const Specification&) const = default;
};

/// Ordered specification space. Specs are listed y-option-major; z subsets
/// follow a binary counter over z_pool (bit 0 = z_pool[0]).
struct SpecSpace {
    std::vector<std::vector<std::string>> y_options;
    std::vector<std::string> x_cols;  // x_cols[0] is the focal estimand
    std::vector<std::string> z_pool;
    Estimator estimator = Estimator::ols;
    OutcomeMode mode = OutcomeMode::single_y;
    std::vector<Specification> specs;

    std::size_t size() const noexcept { return specs.size(); }
    const std::string& focal() const { return x_cols.front(); }
};

/// All non-empty subsets of `cols` in lexicographic order of their index tuples:
/// {0}, {0,1}, {0,1,2}, ..., {0,2}, ..., {1}, ...
std::vector<std::vector<std::size_t>> lexicographic_subsets(std::size_t n);

/// z-subset names for a mask, in z_pool order.
std::vector<std::string> subset_from_mask(const std::vector<std::string>& pool, std::uint64_t mask);

SpecSpace enumerate(const std::vector<std::string>& y_cols, const std::vector<std::string>& x_cols,
                    const std::vector<std::string>& z_pool, OutcomeMode mode,
                    Estimator estimator = Estimator::ols);

/// Row-wise mean of z-scored members (population sd over each member's
/// non-missing rows). Rows with any missing member are missing.
std::vector<double> compose(const Dataset& ds, const std::vector<std::string>& y_subset);

/// Largest space enumerate() will materialize; bigger pools must be subsampled.
inline constexpr std::uint64_t kMaxMaterializedSpecs = std::uint64_t{1} << 24;

/// Uniform without-replacement draws of m_y y options and m_z z subsets; the
/// reduced space is their product, re-indexed in canonical order. Only the
/// space's y_options and z_pool are consulted, so `space.specs` may be empty.
SpecSpace subsample(const SpecSpace& space, std::size_t m_y, std::uint64_t m_z, std::uint64_t seed);

/// enumerate() followed by subsample() without materializing the full space.
SpecSpace enumerate_sampled(const std::vector<std::string>& y_cols,
                            const std::vector<std::string>& x_cols,
                            const std::vector<std::string>& z_pool, OutcomeMode mode,
                            Estimator estimator, std::size_t m_y, std::uint64_t m_z,
                            std::uint64_t seed);

/// Human-readable key: "y1+y2 | z1,z3" in multi-y mode, "z1,z3" otherwise.
std::string spec_label(const SpecSpace& space, const Specification& spec);

}  // namespace specurve
