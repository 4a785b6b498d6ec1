#pragma once

#include "specurve/fitting.hpp"
#include "specurve/random.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace specurve {

/// Focal estimates and p-values per (spec, draw); NaN where a refit was rejected
/// or the spec itself could not be fitted.
struct BootstrapMatrix {
    Eigen::MatrixXd estimates;  // |specs| x B
    Eigen::MatrixXd pvalues;    // |specs| x B
    std::vector<std::size_t> rejected;  // per spec, number of missing draws

    Eigen::Index n_specs() const noexcept { return estimates.rows(); }
    Eigen::Index n_draws() const noexcept { return estimates.cols(); }
};

/// Test instrumentation. `resampler` replaces the seeded row draw; `observer`
/// sees the dataset rows each spec is refitted on.
struct BootstrapHooks {
    std::function<std::vector<std::size_t>(std::size_t draw, std::size_t n_rows)> resampler;
    std::function<void(std::size_t draw, std::size_t spec, std::span<const std::size_t> rows)> observer;
};

struct BootstrapOptions {
    std::size_t draws = 1000;
    std::uint64_t seed = 0;
    std::size_t n_threads = 1;
    Stream stream = Stream::bootstrap;
    const BootstrapHooks* hooks = nullptr;
};

/// Shared-row bootstrap: draw b picks n_rows dataset row ids with replacement
/// and every spec is refitted on the same ids. `null_shift`, when non-empty,
/// holds per-spec focal estimates removed from the outcome to impose beta_1 = 0.
/// Specs given as nullopt produce all-missing rows.
BootstrapMatrix bootstrap_estimands(std::span<const std::optional<PreparedSpec>> specs, std::size_t n_rows,
                                    const BootstrapOptions& options,
                                    std::span<const double> null_shift = {});

/// Null bootstrap: bootstrap_estimands with the null shift and its own stream.
BootstrapMatrix null_bootstrap(std::span<const std::optional<PreparedSpec>> specs, std::size_t n_rows,
                               std::span<const double> full_sample, BootstrapOptions options);

/// Type-7 (linear interpolation) empirical quantile of the non-missing values.
/// Throws NumericError if every value is missing.
double empirical_quantile(std::span<const double> values, double q);

struct Band {
    double low = 0.0;
    double median = 0.0;
    double high = 0.0;
};

/// Per-spec central interval of level alpha over the draws; alpha = 1 gives
/// (min, max). Specs without any draws get NaN bounds.
std::vector<Band> confidence_band(const BootstrapMatrix& boot, double alpha);

inline constexpr std::size_t kFunctionals = 8;

/// S1 median, S2 min, S3 max, S4 count positive, S5 count negative,
/// S6 count p < threshold, S7 positive and significant, S8 negative and significant.
struct CurveStats {
    std::array<double, kFunctionals> s{};
    std::size_t defined = 0;  // pairs with both estimate and p-value present

    double share(std::size_t k) const { return defined ? s[k] / static_cast<double>(defined) : 0.0; }
};

const char* functional_name(std::size_t k) noexcept;

/// Pairs where either value is missing are skipped. NaN statistics when nothing is defined.
CurveStats curve_functionals(std::span<const double> omega, std::span<const double> pvals,
                             double threshold = 0.05);

/// p_k = #{b : T_k(null draw b) > T_k(observed)} / #{defined draws}, where T is
/// the value for S1-S3 and the share for the count functionals (so draws with
/// missing specs stay comparable).
std::array<double, kFunctionals> null_pvalues(const CurveStats& observed, std::span<const CurveStats> null_draws);

struct StoufferResult {
    double z = 0.0;
    double p = 0.5;
};

/// Z = n^{-1/2} sum Phi^{-1}(1 - p_i) with p clipped to [1e-15, 1 - 1e-15]; p = Phi(-Z).
/// Missing p-values are skipped.
StoufferResult stouffer(std::span<const double> pvals);

struct CurveInference {
    std::vector<double> full_sample;
    std::vector<double> pvals;
    CurveStats observed;
    CurveStats pooled_bootstrap;  // functionals over every (spec, draw) pair
    std::vector<CurveStats> null_draws;
    std::array<double, kFunctionals> null_pvals{};
    StoufferResult stouffer;
    bool descriptive = false;  // null p-values are diagnostics only (FE or logistic)
    double threshold = 0.05;
};

/// Assembles the curve-level inference block from full-sample fits and the two bootstraps.
CurveInference curve_inference(std::span<const double> full_sample, std::span<const double> pvals,
                               const BootstrapMatrix& boot, const BootstrapMatrix& null_boot,
                               double threshold, bool descriptive);

/// Specs whose refits were rejected in more than half the draws.
std::vector<std::size_t> unstable_specs(const BootstrapMatrix& boot);

}  // namespace specurve
