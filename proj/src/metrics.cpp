#include "specurve/metrics.hpp"

#include "specurve/errors.hpp"
#include "specurve/estimators.hpp"

#include <cmath>
#include <limits>

namespace specurve {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(AicPenalty a) noexcept {
    return a == AicPenalty::observations ? "observations" : "parameters";
}

AicPenalty parse_aic_penalty(const std::string& s) {
    if (s == "observations") return AicPenalty::observations;
    if (s == "parameters") return AicPenalty::parameters;
    throw ConfigError("unknown AIC penalty '" + s + "' (expected observations or parameters)");
}

double InSampleMetrics::fit_measure() const {
    if (adj_r2) return *adj_r2;
    if (mcfadden_r2) return *mcfadden_r2;
    return kNaN;
}

double adjusted_r2(std::span<const double> y, std::span<const double> yhat, std::size_t p) {
    const std::size_t n = y.size();
    if (n != yhat.size() || n <= p + 1) return kNaN;
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double rss = 0.0;
    double tss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        rss += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        tss += (y[i] - mean) * (y[i] - mean);
    }
    if (!(tss > 0.0)) return kNaN;
    const double nn = static_cast<double>(n);
    return 1.0 - (rss / (nn - static_cast<double>(p) - 1.0)) / (tss / (nn - 1.0));
}

double adjusted_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat, std::size_t p) {
    return adjusted_r2(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())),
                       std::span<const double>(yhat.data(), static_cast<std::size_t>(yhat.size())), p);
}

double mcfadden_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& phat) {
    const double ybar = y.mean();
    if (!(ybar > 0.0 && ybar < 1.0)) return kNaN;
    const double ll_null = static_cast<double>(y.size()) *
                           (ybar * std::log(ybar) + (1.0 - ybar) * std::log1p(-ybar));
    return 1.0 - bernoulli_loglik(y, phat) / ll_null;
}

InformationCriteria information_criteria(double loglik, std::size_t n, std::size_t p, AicPenalty penalty) {
    const double nn = static_cast<double>(n);
    const double pp = static_cast<double>(p);
    InformationCriteria ic;
    ic.aic = 2.0 * aic_penalty_count(penalty, n, p) - 2.0 * loglik;
    ic.bic = pp * std::log(nn) - 2.0 * loglik;
    ic.hqic = n >= 3 ? 2.0 * pp * std::log(std::log(nn)) - 2.0 * loglik : kNaN;
    return ic;
}

std::optional<Extreme> arg_max(std::span<const double> v) {
    std::optional<Extreme> best;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::isnan(v[i])) continue;
        if (!best || v[i] > best->value) best = Extreme{i, v[i]};
    }
    return best;
}

std::optional<Extreme> arg_min(std::span<const double> v) {
    std::optional<Extreme> best;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::isnan(v[i])) continue;
        if (!best || v[i] < best->value) best = Extreme{i, v[i]};
    }
    return best;
}

SelectorReport select_extremes(std::span<const std::optional<InSampleMetrics>> results) {
    auto column = [&](auto&& get) {
        std::vector<double> out(results.size(), kNaN);
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (results[i]) out[i] = get(*results[i]);
        }
        return out;
    };
    const auto fit = column([](const InSampleMetrics& m) { return m.fit_measure(); });
    const auto ll = column([](const InSampleMetrics& m) { return m.loglik; });
    const auto aic = column([](const InSampleMetrics& m) { return m.aic; });
    const auto bic = column([](const InSampleMetrics& m) { return m.bic; });
    const auto hqic = column([](const InSampleMetrics& m) { return m.hqic; });

    SelectorReport r;
    r.max_fit = arg_max(fit);
    r.min_fit = arg_min(fit);
    r.max_loglik = arg_max(ll);
    r.min_loglik = arg_min(ll);
    r.min_aic = arg_min(aic);
    r.min_bic = arg_min(bic);
    r.min_hqic = arg_min(hqic);
    return r;
}

}  // namespace specurve
