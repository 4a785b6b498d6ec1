#pragma once

#include "specurve/dataset.hpp"

#include <Eigen/Dense>

#include <optional>

namespace specurve {

struct FitResult {
    Eigen::VectorXd beta;     // aligned with DesignMatrix columns
    Eigen::VectorXd se;
    Eigen::VectorXd pvalues;
    Eigen::VectorXd fitted;   // linear predictions, or probabilities for logistic
    double loglik = 0.0;
    double rss = 0.0;         // OLS only
    bool converged = true;
    int n_iter = 0;
};

/// Relative tolerance for rank detection in the QR factorisation.
inline constexpr double kRankTolerance = 1e-10;

/// Least squares with classical homoskedastic standard errors and t-based
/// p-values. loglik is the concentrated Gaussian log-likelihood
///   -N/2 * (1 + log(2 pi) + log(RSS / N)).
/// Throws SpecRejected(collinear) on rank deficiency and
/// SpecRejected(insufficient_rows) when N <= P.
FitResult ols_fit(const DesignMatrix& dm);

/// Coefficients only; the bootstrap inner loop needs nothing else.
/// Returns nullopt instead of throwing when the design is rank deficient.
struct OlsCore {
    Eigen::VectorXd beta;
    double focal_se = 0.0;
    double focal_p = 1.0;
};
std::optional<OlsCore> ols_core(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Eigen::Index focal);

/// -N/2 log(2 pi) - RSS/2: the unit-variance Gaussian log-likelihood.
double unit_variance_loglik(double rss, double n) noexcept;

struct LogitOptions {
    int max_iter = 100;
    double tolerance = 1e-7;        // on max |coefficient update|
    int max_halvings = 20;
    double l2_inverse_strength = 0; // C; 0 disables the penalty. Intercept is never penalised.
    const Eigen::VectorXd* offset = nullptr;  // fixed term added to the linear predictor
};

/// Newton-Raphson on the (optionally L2-penalised) Bernoulli log-likelihood with
/// step halving whenever the objective decreases. SEs from the inverse observed
/// information, Wald p-values from the normal distribution.
/// Throws ConfigError if y is not binary, SpecRejected(nonconvergence) on
/// divergence or separation.
FitResult logit_fit(const DesignMatrix& dm, const LogitOptions& options = {});

/// Bernoulli log-likelihood with probabilities clipped to [eps, 1-eps].
double bernoulli_loglik(const Eigen::VectorXd& y, const Eigen::VectorXd& p, double eps = 1e-12);

inline Eigen::VectorXd logistic(const Eigen::VectorXd& eta) {
    return eta.unaryExpr([](double v) {
        return v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
    });
}

}  // namespace specurve
