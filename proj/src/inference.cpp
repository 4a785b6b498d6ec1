#include "specurve/inference.hpp"

#include "specurve/distributions.hpp"
#include "specurve/errors.hpp"
#include "specurve/parallel.hpp"
#include "specurve/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specurve {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

BootstrapMatrix bootstrap_estimands(std::span<const std::optional<PreparedSpec>> specs, std::size_t n_rows,
                                    const BootstrapOptions& options, std::span<const double> null_shift) {
    if (options.draws < 1) throw ConfigError("at least one bootstrap draw is required");
    if (!null_shift.empty() && null_shift.size() != specs.size()) {
        throw ConfigError("null shift must have one value per specification");
    }
    const auto n_specs = static_cast<Eigen::Index>(specs.size());
    const auto n_draws = static_cast<Eigen::Index>(options.draws);
    BootstrapMatrix out;
    out.estimates = Eigen::MatrixXd::Constant(n_specs, n_draws, kNaN);
    out.pvalues = Eigen::MatrixXd::Constant(n_specs, n_draws, kNaN);

    const BootstrapHooks* hooks = options.hooks;
    parallel_for(options.draws, options.n_threads, [&](std::size_t b) {
        std::vector<std::size_t> rows;
        if (hooks && hooks->resampler) {
            rows = hooks->resampler(b, n_rows);
        } else {
            Rng rng(derive_seed(options.seed, options.stream, b));
            rows = resample_indices(n_rows, rng);
        }
        for (std::size_t s = 0; s < specs.size(); ++s) {
            if (!specs[s]) continue;
            if (hooks && hooks->observer) hooks->observer(b, s, rows);
            std::optional<double> shift;
            if (!null_shift.empty()) {
                if (std::isnan(null_shift[s])) continue;
                shift = null_shift[s];
            }
            const auto r = specs[s]->refit_focal(rows, shift);
            if (!r) continue;
            out.estimates(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(b)) = r->estimate;
            out.pvalues(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(b)) = r->pvalue;
        }
    });

    out.rejected.assign(specs.size(), 0);
    for (Eigen::Index s = 0; s < n_specs; ++s) {
        for (Eigen::Index b = 0; b < n_draws; ++b) {
            if (std::isnan(out.estimates(s, b))) ++out.rejected[static_cast<std::size_t>(s)];
        }
    }
    return out;
}

BootstrapMatrix null_bootstrap(std::span<const std::optional<PreparedSpec>> specs, std::size_t n_rows,
                               std::span<const double> full_sample, BootstrapOptions options) {
    options.stream = Stream::null_bootstrap;
    return bootstrap_estimands(specs, n_rows, options, full_sample);
}

double empirical_quantile(std::span<const double> values, double q) {
    std::vector<double> v;
    v.reserve(values.size());
    for (double x : values) {
        if (!std::isnan(x)) v.push_back(x);
    }
    if (v.empty()) throw NumericError("quantile of an all-missing row");
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<Band> confidence_band(const BootstrapMatrix& boot, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("confidence level must lie in (0, 1]");
    const double q_lo = (1.0 - alpha) / 2.0;
    const double q_hi = 1.0 - q_lo;
    std::vector<Band> out(static_cast<std::size_t>(boot.n_specs()), Band{kNaN, kNaN, kNaN});
    std::vector<double> row(static_cast<std::size_t>(boot.n_draws()));
    for (Eigen::Index s = 0; s < boot.n_specs(); ++s) {
        for (Eigen::Index b = 0; b < boot.n_draws(); ++b) row[static_cast<std::size_t>(b)] = boot.estimates(s, b);
        if (std::all_of(row.begin(), row.end(), [](double x) { return std::isnan(x); })) continue;
        auto& band = out[static_cast<std::size_t>(s)];
        band.low = empirical_quantile(row, q_lo);
        band.median = empirical_quantile(row, 0.5);
        band.high = empirical_quantile(row, q_hi);
    }
    return out;
}

const char* functional_name(std::size_t k) noexcept {
    static constexpr const char* names[kFunctionals] = {
        "median", "min", "max", "positive", "negative", "significant", "positive_significant", "negative_significant",
    };
    return k < kFunctionals ? names[k] : "?";
}

CurveStats curve_functionals(std::span<const double> omega, std::span<const double> pvals, double threshold) {
    if (omega.size() != pvals.size()) throw ConfigError("estimates and p-values differ in length");
    CurveStats st;
    std::vector<double> kept;
    kept.reserve(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w = omega[i];
        const double p = pvals[i];
        if (std::isnan(w) || std::isnan(p)) continue;
        kept.push_back(w);
        const bool sig = p < threshold;
        st.s[3] += w > 0.0;
        st.s[4] += w < 0.0;
        st.s[5] += sig;
        st.s[6] += w > 0.0 && sig;
        st.s[7] += w < 0.0 && sig;
    }
    st.defined = kept.size();
    if (kept.empty()) {
        st.s[0] = st.s[1] = st.s[2] = kNaN;
        return st;
    }
    st.s[0] = empirical_quantile(kept, 0.5);
    const auto [mn, mx] = std::minmax_element(kept.begin(), kept.end());
    st.s[1] = *mn;
    st.s[2] = *mx;
    return st;
}

namespace {
double comparable(const CurveStats& st, std::size_t k) {
    return k < 3 ? st.s[k] : st.share(k);
}
}  // namespace

std::array<double, kFunctionals> null_pvalues(const CurveStats& observed, std::span<const CurveStats> null_draws) {
    std::array<double, kFunctionals> p{};
    for (std::size_t k = 0; k < kFunctionals; ++k) {
        const double obs = comparable(observed, k);
        std::size_t above = 0;
        std::size_t used = 0;
        for (const auto& d : null_draws) {
            if (d.defined == 0) continue;
            ++used;
            above += comparable(d, k) > obs;
        }
        p[k] = used ? static_cast<double>(above) / static_cast<double>(used) : kNaN;
    }
    return p;
}

StoufferResult stouffer(std::span<const double> pvals) {
    constexpr double lo = 1e-15;
    constexpr double hi = 1.0 - 1e-15;
    double sum = 0.0;
    std::size_t n = 0;
    for (double p : pvals) {
        if (std::isnan(p)) continue;
        sum += normal_quantile(1.0 - std::clamp(p, lo, hi));
        ++n;
    }
    StoufferResult r;
    if (n == 0) return r;
    r.z = sum / std::sqrt(static_cast<double>(n));
    r.p = normal_cdf(-r.z);
    return r;
}

CurveInference curve_inference(std::span<const double> full_sample, std::span<const double> pvals,
                               const BootstrapMatrix& boot, const BootstrapMatrix& null_boot, double threshold,
                               bool descriptive) {
    CurveInference ci;
    ci.full_sample.assign(full_sample.begin(), full_sample.end());
    ci.pvals.assign(pvals.begin(), pvals.end());
    ci.threshold = threshold;
    ci.descriptive = descriptive;
    ci.observed = curve_functionals(full_sample, pvals, threshold);

    // Column-major storage makes the pooled view a flat span.
    const auto pooled = static_cast<std::size_t>(boot.estimates.size());
    ci.pooled_bootstrap = curve_functionals(std::span<const double>(boot.estimates.data(), pooled),
                                            std::span<const double>(boot.pvalues.data(), pooled), threshold);

    const auto n = static_cast<std::size_t>(null_boot.n_specs());
    ci.null_draws.reserve(static_cast<std::size_t>(null_boot.n_draws()));
    for (Eigen::Index b = 0; b < null_boot.n_draws(); ++b) {
        ci.null_draws.push_back(curve_functionals(std::span<const double>(null_boot.estimates.col(b).data(), n),
                                                  std::span<const double>(null_boot.pvalues.col(b).data(), n),
                                                  threshold));
    }
    ci.null_pvals = null_pvalues(ci.observed, ci.null_draws);
    ci.stouffer = stouffer(pvals);
    return ci;
}

std::vector<std::size_t> unstable_specs(const BootstrapMatrix& boot) {
    std::vector<std::size_t> out;
    const auto b = static_cast<std::size_t>(boot.n_draws());
    for (std::size_t s = 0; s < boot.rejected.size(); ++s) {
        if (2 * boot.rejected[s] > b) out.push_back(s);
    }
    return out;
}

}  // namespace specurve
