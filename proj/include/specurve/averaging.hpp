#pragma once

#include "specurve/dataset.hpp"
#include "specurve/spec_space.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace specurve {

/// exp(-(ic - min ic) / 2), normalised. NaN entries get weight 0.
/// Throws NumericError if no entry is finite.
std::vector<double> ic_weights(std::span<const double> ic);

/// sum_pi w_pi * omega_pi with w from ic_weights(); specs with a missing
/// estimate are dropped before weighting.
double ic_weighted_focal(std::span<const double> omegas, std::span<const double> ic);

using CoefMap = std::vector<std::pair<std::string, double>>;

struct BMAResult {
    std::vector<double> weights;           // per spec; 0 for unfitted specs
    std::vector<std::string> names;        // z_pool order
    std::vector<double> averaged_beta;     // sum_pi w_pi beta_{p,pi}, absent = 0
    std::vector<double> inclusion;         // sum of weights of specs containing p
    double aic_weighted = 0.0;
    double bic_weighted = 0.0;
    double hqic_weighted = 0.0;
};

/// BIC-weighted model averaging of control coefficients. `coefs[i]` maps the
/// controls in spec i to their estimates.
BMAResult bma(const std::vector<std::string>& z_pool, std::span<const double> bics,
              std::span<const CoefMap> coefs);

struct ShapResult {
    Eigen::MatrixXd phi;                   // N_test x features
    std::vector<std::string> feature_names;
    Eigen::VectorXd feature_means;         // training means
    Eigen::MatrixXd test_features;         // N_test x features
    Eigen::VectorXd prediction;            // linear predictor on the test rows
    double base_value = 0.0;               // prediction at the feature means
    std::vector<std::size_t> test_rows;    // dataset row ids
};

inline constexpr double kShapLogisticC = 0.1;

/// Exact SHAP values of a linear model fitted on a seeded 80/20 split of the
/// design. Logistic attributions are on the log-odds scale from an L2-penalised
/// fit with inverse strength kShapLogisticC. The intercept is not attributed.
ShapResult linear_shap(const DesignMatrix& dm, Estimator estimator, std::uint64_t split_seed);

}  // namespace specurve
