#pragma once

#include "specurve/results.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace specurve {

/// Full pipeline on an in-memory dataset: enumerate, fit, in-sample metrics,
/// cross-validation, bootstrap, null bootstrap, inference, BMA and SHAP.
/// `hooks` is forwarded to both bootstraps (tests only).
CurveResults run(const RunConfig& config, const Dataset& ds, const BootstrapHooks* hooks = nullptr);

/// Loads config.data_path (with config.group and config.na_markers) and runs.
CurveResults run(const RunConfig& config);

struct SyntheticOptions {
    std::size_t n_rows = 100;
    std::size_t n_controls = 4;
    double beta = 2.0;          // focal coefficient
    bool binary = false;        // logistic outcome
    std::uint64_t seed = 0;
};

/// y = 1 + beta * x1 + 0.5 * sum_j z_j + 0.5 * e with x1, z_j, e independent
/// standard normals. Columns: y, x1, z1..zD. Binary outcomes are Bernoulli
/// draws on the noise-free linear predictor.
Dataset synthetic_dataset(const SyntheticOptions& options);

struct ProfileGrid {
    std::vector<std::size_t> draws;
    std::vector<std::size_t> folds;
    std::vector<std::size_t> controls;
    std::size_t repeats = 3;
    std::size_t n_rows = 200;
    Estimator estimator = Estimator::ols;
    std::uint64_t seed = 0;
    std::size_t n_cpu = 1;
};

/// `count` integers log-spaced over [lo, hi], deduplicated.
std::vector<std::size_t> log_spaced(std::size_t lo, std::size_t hi, std::size_t count);

struct ProfileCell {
    std::size_t draws = 0;
    std::size_t folds = 0;
    std::size_t controls = 0;
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

struct ProfileReport {
    std::vector<ProfileCell> cells;
    double slope = 0.0;  // d log(runtime) / d log(draws), pooled within (folds, controls)
};

ProfileReport profile(const ProfileGrid& grid);

/// Pooled within-group least-squares slope of log(median runtime) on log(draws).
double loglog_slope(const std::vector<ProfileCell>& cells);

std::string format_profile(const ProfileReport& report);

}  // namespace specurve
