#pragma once

#include "specurve/averaging.hpp"
#include "specurve/inference.hpp"
#include "specurve/metrics.hpp"
#include "specurve/oos.hpp"
#include "specurve/spec_space.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace specurve {

struct RunConfig {
    std::string data_path;
    std::vector<std::string> y_cols;
    std::vector<std::string> x_cols;
    std::vector<std::string> z_cols;
    std::optional<std::string> group;  // enables fixed effects
    std::vector<std::string> na_markers{"", "NA", "NaN", "nan", "."};
    Estimator estimator = Estimator::ols;
    OutcomeMode mode = OutcomeMode::single_y;
    std::size_t draws = 1000;
    std::size_t kfold = 10;
    std::uint64_t seed = 0;
    double ci = 1.0;
    OosMetric oos_metric = OosMetric::pseudo_r2;
    std::size_t n_cpu = 1;
    std::optional<std::size_t> sample_y;
    std::optional<std::uint64_t> sample_z;
    AicPenalty aic_penalty = AicPenalty::observations;
    double threshold = 0.05;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

struct SpecResult {
    bool fitted = false;
    std::string reject_reason;
    std::size_t n = 0;
    std::size_t p = 0;
    double estimate = 0.0;
    double se = 0.0;
    double pvalue = 0.0;
    std::vector<std::string> coef_names;
    std::vector<double> coef_values;
    std::optional<InSampleMetrics> metrics;
    std::optional<OOSMetrics> oos;
};

struct Diagnostics {
    std::vector<std::string> warnings;
    std::size_t rejected_specs = 0;
    std::size_t singleton_groups = 0;
};

struct CurveResults {
    RunConfig config;
    SpecSpace space;
    std::vector<SpecResult> specs;
    BootstrapMatrix boot;
    BootstrapMatrix null_boot;
    CurveInference inference;
    BMAResult bma;
    std::optional<ShapResult> shap;
    Diagnostics diagnostics;
    std::map<std::string, double> timings;  // seconds per stage; not exported

    std::vector<double> estimates() const;
    std::vector<double> pvalues() const;
    /// Per-spec information criterion by name ("aic", "bic", "hqic"), NaN if unfitted.
    std::vector<double> criterion(const std::string& which) const;
    std::vector<double> oos_averages() const;
};

/// Text report: model summary, inference metrics, in-sample extremes, OOS extremes.
std::string summary(const CurveResults& res);

inline constexpr int kSchemaVersion = 1;

/// results.json (everything needed to rebuild the summary and charts),
/// specs.csv (per-spec table) and draws.csv (bootstrap estimates, spec x draw).
void export_results(const CurveResults& res, const std::filesystem::path& dir);
std::string to_json(const CurveResults& res);
CurveResults from_json(const std::string& text);
CurveResults load_results(const std::filesystem::path& results_json);

/// Recomputes inference, BMA and IC-weighted estimates from the per-spec
/// results and bootstrap matrices.
void recompute_curve(CurveResults& res);

/// Stacks runs with equal draws, folds and estimator; specs are re-indexed
/// in input order and curve-level statistics recomputed over the union.
CurveResults concat_results(const std::vector<CurveResults>& runs);

struct OddsRatioView {
    std::vector<double> estimates;
    std::vector<Band> bands;
};

/// exp() applied to estimates and band bounds, for display only.
OddsRatioView odds_ratio_view(std::span<const double> omegas, std::span<const Band> bands);

/// Python-style rendering of round(x, 4): shortest repr, always with a decimal point.
std::string round4(double x);

}  // namespace specurve
