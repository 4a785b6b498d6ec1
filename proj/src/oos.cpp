#include "specurve/oos.hpp"

#include "specurve/errors.hpp"
#include "specurve/estimators.hpp"
#include "specurve/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace specurve {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(OosMetric m) noexcept {
    switch (m) {
        case OosMetric::rmse: return "rmse";
        case OosMetric::pseudo_r2: return "pseudo-r2";
        case OosMetric::mcfadden_r2: return "mcfaddens-r2";
        case OosMetric::cross_entropy: return "cross-entropy";
        case OosMetric::imv: return "imv";
    }
    return "?";
}

OosMetric parse_oos_metric(const std::string& s) {
    for (auto m : {OosMetric::rmse, OosMetric::pseudo_r2, OosMetric::mcfadden_r2, OosMetric::cross_entropy,
                   OosMetric::imv}) {
        if (s == to_string(m)) return m;
    }
    throw ConfigError("unknown OOS metric '" + s +
                      "' (expected rmse, pseudo-r2, mcfaddens-r2, cross-entropy or imv)");
}

bool requires_binary(OosMetric m) noexcept {
    return m == OosMetric::mcfadden_r2 || m == OosMetric::cross_entropy || m == OosMetric::imv;
}

std::vector<std::size_t> FoldPlan::members(std::size_t f) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == f) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::sizes() const {
    std::vector<std::size_t> out(k, 0);
    for (auto a : assignments) ++out[a];
    return out;
}

FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("at least 2 folds are required");
    if (k > n) {
        throw ConfigError("cannot split " + std::to_string(n) + " rows into " + std::to_string(k) + " folds");
    }
    Rng rng(seed);
    const auto perm = permutation(n, rng);
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(n, 0);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        for (std::size_t j = 0; j < size; ++j) plan.assignments[perm[pos++]] = f;
    }
    return plan;
}

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    if (y.size() == 0) throw ConfigError("rmse of an empty fold");
    return std::sqrt((y - yhat).squaredNorm() / static_cast<double>(y.size()));
}

double pseudo_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat, double train_mean) {
    if (y.size() == 0) throw ConfigError("pseudo-r2 of an empty fold");
    const double denom = (y.array() - train_mean).square().sum();
    if (!(denom > 0.0)) return kNaN;
    return 1.0 - (y - yhat).squaredNorm() / denom;
}

double mcfadden_oos(const Eigen::VectorXd& y, const Eigen::VectorXd& phat, double train_mean) {
    if (!(train_mean > 0.0 && train_mean < 1.0)) return kNaN;
    const Eigen::VectorXd null = Eigen::VectorXd::Constant(y.size(), train_mean);
    const double ll_null = bernoulli_loglik(y, null, kProbabilityClip);
    return 1.0 - bernoulli_loglik(y, phat, kProbabilityClip) / ll_null;
}

double cross_entropy(const Eigen::VectorXd& y, const Eigen::VectorXd& phat) {
    if (y.size() == 0) throw ConfigError("cross-entropy of an empty fold");
    return -bernoulli_loglik(y, phat, kProbabilityClip) / static_cast<double>(y.size());
}

double imv_entropic_weight(double mean_ll, bool* clamped) {
    if (clamped) *clamped = false;
    const double floor = -std::numbers::ln2;
    if (mean_ll <= floor) {
        if (clamped && mean_ll < floor) *clamped = true;
        return 0.5;
    }
    auto h = [](double w) { return w * std::log(w) + (1.0 - w) * std::log1p(-w); };
    double lo = 0.5;
    double hi = 1.0;
    // h is increasing on [0.5, 1) with h(0.5) = -log 2 and h(1-) = 0.
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (h(mid) < mean_ll) lo = mid; else hi = mid;
    }
    const double w = 0.5 * (lo + hi);
    return w < 1.0 ? w : lo;
}

ImvResult imv(const Eigen::VectorXd& y, const Eigen::VectorXd& phat, double null_rate) {
    const double n = static_cast<double>(y.size());
    const Eigen::VectorXd null = Eigen::VectorXd::Constant(y.size(), null_rate);
    bool c1 = false;
    bool c2 = false;
    ImvResult r;
    r.w_enhanced = imv_entropic_weight(bernoulli_loglik(y, phat, kProbabilityClip) / n, &c1);
    r.w_null = imv_entropic_weight(bernoulli_loglik(y, null, kProbabilityClip) / n, &c2);
    r.clamped = c1 || c2;
    r.value = (r.w_enhanced - r.w_null) / r.w_null;
    return r;
}

OOSMetrics cv_evaluate(const DesignMatrix& dm, const FoldPlan& plan, OosMetric metric, Estimator estimator) {
    if (plan.assignments.size() != static_cast<std::size_t>(dm.N())) {
        throw ConfigError("fold plan does not match the design's row count");
    }
    if (requires_binary(metric) && estimator != Estimator::logistic) {
        throw ConfigError(std::string("OOS metric ") + to_string(metric) + " requires the logistic estimator");
    }
    OOSMetrics out;
    out.metric = metric;
    out.per_fold.assign(plan.k, kNaN);
    out.flagged.assign(plan.k, false);

    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t f = 0; f < plan.k; ++f) {
        train.clear();
        test.clear();
        for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
            (plan.assignments[i] == f ? test : train).push_back(i);
        }
        const DesignMatrix tr = take_rows(dm, train);
        const DesignMatrix te = take_rows(dm, test);
        Eigen::VectorXd pred;
        try {
            if (estimator == Estimator::ols) {
                pred = te.X * ols_fit(tr).beta;
            } else {
                pred = logistic(te.X * logit_fit(tr).beta);
            }
        } catch (const SpecRejected&) {
            out.flagged[f] = true;
            ++out.rejected_folds;
            continue;
        }
        const double train_mean = tr.y.mean();
        double v = kNaN;
        switch (metric) {
            case OosMetric::rmse: v = rmse(te.y, pred); break;
            case OosMetric::pseudo_r2: v = pseudo_r2(te.y, pred, train_mean); break;
            case OosMetric::mcfadden_r2: v = mcfadden_oos(te.y, pred, train_mean); break;
            case OosMetric::cross_entropy: v = cross_entropy(te.y, pred); break;
            case OosMetric::imv: {
                const auto r = imv(te.y, pred, te.y.mean());
                v = r.value;
                out.flagged[f] = r.clamped;
                break;
            }
        }
        out.per_fold[f] = v;
        if (std::isnan(v)) {
            out.flagged[f] = true;
            ++out.rejected_folds;
            continue;
        }
        sum += v;
        ++used;
    }
    out.cv_average = used ? sum / static_cast<double>(used) : kNaN;
    return out;
}

}  // namespace specurve
