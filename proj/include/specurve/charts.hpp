#pragma once

#include "specurve/results.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace specurve {

/// Local linear regression with tricube weights over the ceil(span * n)
/// nearest neighbours of each point. Requires span in (0, 1] and n >= 3.
std::vector<double> loess_smooth(std::span<const double> xs, std::span<const double> ys, double span = 0.3);

enum class ChartFormat { svg, pdf_data };

ChartFormat parse_chart_format(const std::string& s);

struct ChartOptions {
    std::vector<std::vector<std::string>> highlight;  // extra z subsets to mark
    double ci = 1.0;
    std::string ic = "bic";
    bool loess = false;
    bool odds_ratio = false;
    ChartFormat format = ChartFormat::svg;
};

/// Spec indices ordered by median bootstrap draw; ties and all-missing specs
/// fall back to spec index (missing last).
std::vector<std::size_t> curve_order(const BootstrapMatrix& boot);

/// Highlighted spec indices: the full model and the no-controls model, then
/// the requested subsets. Throws ConfigError naming valid subsets on a miss.
std::vector<std::size_t> resolve_highlights(const CurveResults& res,
                                            const std::vector<std::vector<std::string>>& extra);

/// Writes panel_<x>.csv for each panel, plus panel_<x>.svg for the svg
/// format. Likelihood panels (b, c, h) are skipped in multi-outcome runs.
/// Returns the written file names.
std::vector<std::string> emit_charts(const CurveResults& res, const ChartOptions& options,
                                     const std::filesystem::path& dir);

}  // namespace specurve
