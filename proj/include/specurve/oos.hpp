#pragma once

#include "specurve/dataset.hpp"
#include "specurve/spec_space.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace specurve {

enum class OosMetric { rmse, pseudo_r2, mcfadden_r2, cross_entropy, imv };

const char* to_string(OosMetric m) noexcept;
OosMetric parse_oos_metric(const std::string& s);

/// Metrics that only make sense for probabilistic binary predictions.
bool requires_binary(OosMetric m) noexcept;

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  // fold label per row
    std::uint64_t seed = 0;

    /// Row positions in fold `f`, ascending.
    std::vector<std::size_t> members(std::size_t f) const;
    std::vector<std::size_t> sizes() const;
};

/// Seeded uniform permutation of 0..n-1 cut into k contiguous blocks; the
/// first n % k blocks hold one extra row. Requires 2 <= k <= n.
FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed);

struct OOSMetrics {
    OosMetric metric = OosMetric::rmse;
    std::vector<double> per_fold;          // NaN where the fold was rejected
    std::vector<bool> flagged;             // rejected fit or clamped IMV
    std::size_t rejected_folds = 0;
    double cv_average = 0.0;               // mean over non-rejected folds
};

inline constexpr double kProbabilityClip = 1e-12;

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

/// 1 - SSE / sum (y - train_mean)^2.
double pseudo_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat, double train_mean);

/// McFadden's R^2 with the null model at `train_mean`; phat clipped to [eps, 1-eps].
double mcfadden_oos(const Eigen::VectorXd& y, const Eigen::VectorXd& phat, double train_mean);

/// -mean[y log p + (1-y) log(1-p)] with clipped probabilities.
double cross_entropy(const Eigen::VectorXd& y, const Eigen::VectorXd& phat);

/// Solves w log w + (1-w) log(1-w) = mean_ll on [0.5, 1) by bisection.
/// Returns 0.5 and sets *clamped when mean_ll < -log 2.
double imv_entropic_weight(double mean_ll, bool* clamped = nullptr);

struct ImvResult {
    double value = 0.0;
    double w_enhanced = 0.0;
    double w_null = 0.0;
    bool clamped = false;
};

/// InterModel Vigorish of `phat` against a constant predictor at `null_rate`.
ImvResult imv(const Eigen::VectorXd& y, const Eigen::VectorXd& phat, double null_rate);

/// K-fold evaluation of one specification's design. Folds whose training fit
/// is rejected are flagged and excluded from the average.
OOSMetrics cv_evaluate(const DesignMatrix& dm, const FoldPlan& plan, OosMetric metric, Estimator estimator);

}  // namespace specurve
