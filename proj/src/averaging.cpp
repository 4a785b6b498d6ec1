#include "specurve/averaging.hpp"

#include "specurve/errors.hpp"
#include "specurve/estimators.hpp"
#include "specurve/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specurve {

std::vector<double> ic_weights(std::span<const double> ic) {
    double lo = std::numeric_limits<double>::infinity();
    for (double v : ic) {
        if (std::isfinite(v)) lo = std::min(lo, v);
    }
    if (!std::isfinite(lo)) throw NumericError("no finite information criterion to weight by");
    std::vector<double> w(ic.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < ic.size(); ++i) {
        if (!std::isfinite(ic[i])) continue;
        w[i] = std::exp(-(ic[i] - lo) / 2.0);
        total += w[i];
    }
    for (auto& v : w) v /= total;
    return w;
}

double ic_weighted_focal(std::span<const double> omegas, std::span<const double> ic) {
    if (omegas.size() != ic.size()) throw ConfigError("estimates and criteria differ in length");
    std::vector<double> masked(ic.begin(), ic.end());
    for (std::size_t i = 0; i < masked.size(); ++i) {
        if (std::isnan(omegas[i])) masked[i] = std::numeric_limits<double>::quiet_NaN();
    }
    const auto w = ic_weights(masked);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 0.0) s += w[i] * omegas[i];
    }
    return s;
}

BMAResult bma(const std::vector<std::string>& z_pool, std::span<const double> bics, std::span<const CoefMap> coefs) {
    if (bics.size() != coefs.size()) throw ConfigError("criteria and coefficient lists differ in length");
    BMAResult r;
    r.weights = ic_weights(bics);
    r.names = z_pool;
    r.averaged_beta.assign(z_pool.size(), 0.0);
    r.inclusion.assign(z_pool.size(), 0.0);
    for (std::size_t i = 0; i < coefs.size(); ++i) {
        if (r.weights[i] == 0.0) continue;
        for (const auto& [name, value] : coefs[i]) {
            const auto it = std::find(z_pool.begin(), z_pool.end(), name);
            if (it == z_pool.end()) continue;
            const auto p = static_cast<std::size_t>(it - z_pool.begin());
            r.averaged_beta[p] += r.weights[i] * value;
            r.inclusion[p] += r.weights[i];
        }
    }
    return r;
}

ShapResult linear_shap(const DesignMatrix& dm, Estimator estimator, std::uint64_t split_seed) {
    const auto n = static_cast<std::size_t>(dm.N());
    const auto n_test = static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(n)));
    if (n_test < 1 || n_test >= n) throw ConfigError("too few rows for a train/test split");
    Rng rng(derive_seed(split_seed, Stream::shap_split));
    const auto perm = permutation(n, rng);
    std::vector<std::size_t> test(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<std::size_t> train(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    std::sort(test.begin(), test.end());
    std::sort(train.begin(), train.end());
    const DesignMatrix tr = take_rows(dm, train);
    const DesignMatrix te = take_rows(dm, test);

    Eigen::VectorXd beta;
    if (estimator == Estimator::ols) {
        beta = ols_fit(tr).beta;
    } else {
        LogitOptions opt;
        opt.l2_inverse_strength = kShapLogisticC;
        beta = logit_fit(tr, opt).beta;
    }

    const Eigen::Index first = dm.has_intercept ? 1 : 0;
    const Eigen::Index k = dm.P() - first;
    ShapResult r;
    r.feature_names.assign(dm.column_names.begin() + first, dm.column_names.end());
    r.feature_means = tr.X.rightCols(k).colwise().mean().transpose();
    r.test_features = te.X.rightCols(k);
    const Eigen::VectorXd b = beta.tail(k);
    r.phi = (r.test_features.rowwise() - r.feature_means.transpose()).array().rowwise() * b.transpose().array();
    r.base_value = (dm.has_intercept ? beta(0) : 0.0) + b.dot(r.feature_means);
    r.prediction = te.X * beta;
    r.test_rows.reserve(n_test);
    for (auto p : test) r.test_rows.push_back(dm.rows[p]);
    return r;
}

}  // namespace specurve
