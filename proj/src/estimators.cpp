#include "specurve/estimators.hpp"

#include "specurve/distributions.hpp"
#include "specurve/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace specurve {

namespace {

// (X'X)^-1 from a column-pivoted QR: P R^-1 R^-T P'.
Eigen::MatrixXd unscaled_covariance(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr) {
    const Eigen::Index p = qr.cols();
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd inner = Rinv * Rinv.transpose();
    const auto& perm = qr.colsPermutation();
    return perm * inner * perm.transpose();
}

double t_pvalue(double beta, double se, double dof) {
    if (se > 0.0) return student_t_two_sided(beta / se, dof);
    return beta == 0.0 ? 1.0 : 0.0;  // exact fit
}

}  // namespace

double unit_variance_loglik(double rss, double n) noexcept {
    return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * rss;
}

FitResult ols_fit(const DesignMatrix& dm) {
    const Eigen::Index n = dm.N();
    const Eigen::Index p = dm.P();
    if (n <= p) {
        throw SpecRejected(RejectReason::insufficient_rows,
                           "N=" + std::to_string(n) + " <= P=" + std::to_string(p));
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dm.X);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < p) throw SpecRejected(RejectReason::collinear, "design matrix is rank deficient");

    FitResult fit;
    fit.beta = qr.solve(dm.y);
    fit.fitted = dm.X * fit.beta;
    const Eigen::VectorXd resid = dm.y - fit.fitted;
    fit.rss = resid.squaredNorm();
    const double dof = static_cast<double>(n - p);
    const double sigma2 = fit.rss / dof;
    const Eigen::MatrixXd cov = unscaled_covariance(qr);
    fit.se = (sigma2 * cov.diagonal().array()).sqrt();
    fit.pvalues.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) fit.pvalues(j) = t_pvalue(fit.beta(j), fit.se(j), dof);
    const double nn = static_cast<double>(n);
    fit.loglik = -0.5 * nn * (1.0 + std::log(2.0 * std::numbers::pi) + std::log(fit.rss / nn));
    return fit;
}

std::optional<OlsCore> ols_core(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Eigen::Index focal) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (n <= p) return std::nullopt;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < p) return std::nullopt;
    OlsCore out;
    out.beta = qr.solve(y);
    const double rss = (y - X * out.beta).squaredNorm();
    const double dof = static_cast<double>(n - p);
    // Only the focal variance is needed: solve R' u = P' e_focal, var = |R^-1 ...|.
    Eigen::VectorXd e = Eigen::VectorXd::Zero(p);
    e(focal) = 1.0;
    const Eigen::VectorXd pe = qr.colsPermutation().transpose() * e;
    const Eigen::VectorXd u = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>().transpose().solve(pe);
    out.focal_se = std::sqrt(rss / dof * u.squaredNorm());
    out.focal_p = t_pvalue(out.beta(focal), out.focal_se, dof);
    return out;
}

double bernoulli_loglik(const Eigen::VectorXd& y, const Eigen::VectorXd& p, double eps) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double pi = std::clamp(p(i), eps, 1.0 - eps);
        ll += y(i) * std::log(pi) + (1.0 - y(i)) * std::log1p(-pi);
    }
    return ll;
}

namespace {

// Exact log-likelihood via log1p(exp(.)) so saturated fits stay finite.
double loglik_from_eta(const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double e = eta(i);
        const double log1pexp = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
        ll += y(i) * e - log1pexp;
    }
    return ll;
}

}  // namespace

FitResult logit_fit(const DesignMatrix& dm, const LogitOptions& options) {
    const Eigen::Index n = dm.N();
    const Eigen::Index p = dm.P();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (dm.y(i) != 0.0 && dm.y(i) != 1.0) throw ConfigError("logistic outcome must be binary (0/1)");
    }
    if (n <= p) {
        throw SpecRejected(RejectReason::insufficient_rows,
                           "N=" + std::to_string(n) + " <= P=" + std::to_string(p));
    }
    // The ridge term keeps the Hessian definite, so only unpenalised fits need full rank.
    if (options.l2_inverse_strength <= 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dm.X);
        qr.setThreshold(kRankTolerance);
        if (qr.rank() < p) throw SpecRejected(RejectReason::collinear, "design matrix is rank deficient");
    }

    Eigen::VectorXd penalty = Eigen::VectorXd::Zero(p);
    if (options.l2_inverse_strength > 0.0) {
        penalty.setConstant(1.0 / options.l2_inverse_strength);
        if (dm.has_intercept) penalty(0) = 0.0;
    }
    const Eigen::VectorXd zero_offset = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd& offset = options.offset ? *options.offset : zero_offset;
    if (offset.size() != n) throw ConfigError("offset length does not match the design");

    auto objective = [&](const Eigen::VectorXd& b) {
        return loglik_from_eta(dm.y, dm.X * b + offset) - 0.5 * (penalty.array() * b.array().square()).sum();
    };

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double obj = objective(beta);
    FitResult fit;
    fit.converged = false;
    Eigen::MatrixXd info(p, p);
    for (int it = 1; it <= options.max_iter; ++it) {
        const Eigen::VectorXd mu = logistic(dm.X * beta + offset);
        const Eigen::VectorXd w = (mu.array() * (1.0 - mu.array())).matrix();
        const Eigen::VectorXd grad = dm.X.transpose() * (dm.y - mu) - penalty.cwiseProduct(beta);
        info = dm.X.transpose() * w.asDiagonal() * dm.X;
        info.diagonal() += penalty;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            throw SpecRejected(RejectReason::nonconvergence, "information matrix is singular (separation?)");
        }
        Eigen::VectorXd step = ldlt.solve(grad);
        if (!step.allFinite()) throw SpecRejected(RejectReason::nonconvergence, "non-finite Newton step");

        Eigen::VectorXd candidate = beta + step;
        double cand_obj = objective(candidate);
        for (int h = 0; h < options.max_halvings && !(cand_obj >= obj); ++h) {
            step *= 0.5;
            candidate = beta + step;
            cand_obj = objective(candidate);
        }
        beta = candidate;
        obj = cand_obj;
        fit.n_iter = it;
        if (step.cwiseAbs().maxCoeff() < options.tolerance) {
            fit.converged = true;
            break;
        }
    }
    if (!fit.converged) {
        throw SpecRejected(RejectReason::nonconvergence,
                           "no convergence after " + std::to_string(options.max_iter) + " iterations");
    }

    const Eigen::VectorXd eta = dm.X * beta + offset;
    fit.beta = beta;
    fit.fitted = logistic(eta);
    const Eigen::VectorXd w = (fit.fitted.array() * (1.0 - fit.fitted.array())).matrix();
    info = dm.X.transpose() * w.asDiagonal() * dm.X;
    info.diagonal() += penalty;
    const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    fit.se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    fit.pvalues.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        fit.pvalues(j) = fit.se(j) > 0 ? normal_two_sided(beta(j) / fit.se(j)) : 1.0;
    }
    fit.loglik = loglik_from_eta(dm.y, eta);
    return fit;
}

}  // namespace specurve
