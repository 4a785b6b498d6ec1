#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace specurve {

/// Which count multiplies 2 in the AIC penalty. `observations` (2N - 2 log L)
/// reproduces the published reference output; `parameters` is the textbook 2P.
enum class AicPenalty { observations, parameters };

const char* to_string(AicPenalty a) noexcept;
AicPenalty parse_aic_penalty(const std::string& s);

struct InformationCriteria {
    double aic = 0.0;
    double bic = 0.0;
    double hqic = 0.0;  // NaN when n < 3
};

struct InSampleMetrics {
    std::optional<double> adj_r2;       // OLS runs
    std::optional<double> mcfadden_r2;  // logistic runs
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double hqic = 0.0;
    std::size_t n = 0;
    std::size_t p = 0;

    /// Adjusted R^2 for OLS, McFadden for logistic; NaN if neither is set.
    double fit_measure() const;
};

/// 1 - [RSS/(N-p-1)] / [TSS/(N-1)]; `p` counts regressors excluding the intercept.
/// NaN when TSS is zero or N <= p+1.
double adjusted_r2(std::span<const double> y, std::span<const double> yhat, std::size_t p);
double adjusted_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat, std::size_t p);

/// 1 - LL_model / LL_null with the null at mean(y). NaN for degenerate mean(y).
double mcfadden_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& phat);

InformationCriteria information_criteria(double loglik, std::size_t n, std::size_t p,
                                         AicPenalty penalty = AicPenalty::observations);

/// The count multiplying 2 in the AIC for the given convention.
inline double aic_penalty_count(AicPenalty penalty, std::size_t n, std::size_t p) {
    return static_cast<double>(penalty == AicPenalty::observations ? n : p);
}

struct Extreme {
    std::size_t index = 0;  // position in the input list
    double value = 0.0;
};

struct SelectorReport {
    std::optional<Extreme> max_fit;      // adj-R^2 or McFadden
    std::optional<Extreme> min_fit;
    std::optional<Extreme> max_loglik;
    std::optional<Extreme> min_loglik;
    std::optional<Extreme> min_aic;
    std::optional<Extreme> min_bic;
    std::optional<Extreme> min_hqic;
};

/// Arg-max/arg-min over the list, skipping missing entries (nullopt or NaN).
/// Ties go to the lowest position.
SelectorReport select_extremes(std::span<const std::optional<InSampleMetrics>> results);

/// Lowest-position arg-max / arg-min of a vector, skipping NaN.
std::optional<Extreme> arg_max(std::span<const double> v);
std::optional<Extreme> arg_min(std::span<const double> v);

}  // namespace specurve
