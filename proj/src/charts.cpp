#include "specurve/charts.hpp"

#include "specurve/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace specurve {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

// Minimal SVG canvas with a data-space to pixel transform.
class Svg {
public:
    Svg(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

    void fit(std::span<const double> xs, std::span<const double> ys) {
        for (double x : xs) {
            if (std::isfinite(x)) { x0_ = std::min(x0_, x); x1_ = std::max(x1_, x); }
        }
        for (double y : ys) {
            if (std::isfinite(y)) { y0_ = std::min(y0_, y); y1_ = std::max(y1_, y); }
        }
    }

    void point(double x, double y, const char* colour, double r = 2.5) {
        if (!std::isfinite(x) || !std::isfinite(y)) return;
        body_ << "<circle cx=\"" << px(X(x)) << "\" cy=\"" << px(Y(y)) << "\" r=\"" << px(r) << "\" fill=\"" << colour
              << "\" fill-opacity=\"0.7\"/>\n";
    }

    void polyline(std::span<const double> xs, std::span<const double> ys, const char* colour, bool dashed = false) {
        body_ << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\""
              << (dashed ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (std::isfinite(xs[i]) && std::isfinite(ys[i])) body_ << px(X(xs[i])) << "," << px(Y(ys[i])) << " ";
        }
        body_ << "\"/>\n";
    }

    void bar(double x_lo, double x_hi, double y, const char* colour) {
        if (!std::isfinite(y)) return;
        const double top = Y(std::max(y, 0.0));
        const double bottom = Y(std::min(y, 0.0));
        body_ << "<rect x=\"" << px(X(x_lo)) << "\" y=\"" << px(top) << "\" width=\"" << px(X(x_hi) - X(x_lo))
              << "\" height=\"" << px(bottom - top) << "\" fill=\"" << colour << "\"/>\n";
    }

    void label(double x, double y, const std::string& text) {
        body_ << "<text x=\"" << px(X(x)) << "\" y=\"" << px(Y(y)) << "\" font-size=\"9\">" << escape(text)
              << "</text>\n";
    }

    std::string str() const {
        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
        o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        o << "<text x=\"" << kW / 2 << "\" y=\"16\" text-anchor=\"middle\" font-size=\"12\">" << escape(title_)
          << "</text>\n";
        o << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\"" << kH - kB
          << "\" stroke=\"black\"/>\n";
        o << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 6 << "\" text-anchor=\"middle\" font-size=\"10\">"
          << escape(xlabel_) << "</text>\n";
        o << "<text x=\"12\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 12 " << kH / 2
          << ")\" text-anchor=\"middle\" font-size=\"10\">" << escape(ylabel_) << "</text>\n";
        for (const auto& [v, pos] : {std::pair{lo(x0_), kL}, std::pair{hi(x1_), kW - kR}}) {
            o << "<text x=\"" << pos << "\" y=\"" << kH - kB + 12 << "\" text-anchor=\"middle\" font-size=\"9\">"
              << escape(tick(v)) << "</text>\n";
        }
        for (const auto& [v, pos] : {std::pair{lo(y0_), kH - kB}, std::pair{hi(y1_), kT}}) {
            o << "<text x=\"" << kL - 4 << "\" y=\"" << pos << "\" text-anchor=\"end\" font-size=\"9\">"
              << escape(tick(v)) << "</text>\n";
        }
        o << body_.str() << "</svg>\n";
        return o.str();
    }

private:
    static constexpr int kW = 480;
    static constexpr int kH = 320;
    static constexpr int kL = 56;
    static constexpr int kR = 16;
    static constexpr int kT = 28;
    static constexpr int kB = 36;

    double lo(double v) const { return std::isfinite(v) ? v : 0.0; }
    double hi(double v) const { return std::isfinite(v) ? v : 1.0; }
    static std::string tick(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }
    double X(double x) const {
        const double a = lo(x0_);
        const double b = hi(x1_) > a ? hi(x1_) : a + 1.0;
        return kL + (x - a) / (b - a) * (kW - kL - kR);
    }
    double Y(double y) const {
        const double a = lo(y0_);
        const double b = hi(y1_) > a ? hi(y1_) : a + 1.0;
        return kH - kB - (y - a) / (b - a) * (kH - kT - kB);
    }

    std::string title_, xlabel_, ylabel_;
    double x0_ = std::numeric_limits<double>::infinity();
    double x1_ = -std::numeric_limits<double>::infinity();
    double y0_ = std::numeric_limits<double>::infinity();
    double y1_ = -std::numeric_limits<double>::infinity();
    std::ostringstream body_;
};

const char* kHighlightColours[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

const char* highlight_colour(std::size_t k) {
    return kHighlightColours[k % (sizeof kHighlightColours / sizeof kHighlightColours[0])];
}

struct Histogram {
    std::vector<double> lo, hi, count;
};

Histogram histogram(std::span<const double> values, std::size_t bins) {
    Histogram h;
    double a = std::numeric_limits<double>::infinity();
    double b = -a;
    for (double v : values) {
        if (std::isfinite(v)) { a = std::min(a, v); b = std::max(b, v); }
    }
    if (!std::isfinite(a)) return h;
    if (b == a) { a -= 0.5; b += 0.5; }
    const double w = (b - a) / static_cast<double>(bins);
    h.count.assign(bins, 0.0);
    for (std::size_t i = 0; i < bins; ++i) {
        h.lo.push_back(a + w * static_cast<double>(i));
        h.hi.push_back(i + 1 == bins ? b : a + w * static_cast<double>(i + 1));
    }
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        auto k = static_cast<std::size_t>((v - a) / w);
        h.count[std::min(k, bins - 1)] += 1.0;
    }
    return h;
}

std::vector<double> row_values(const BootstrapMatrix& boot, std::size_t s) {
    std::vector<double> v(static_cast<std::size_t>(boot.n_draws()));
    for (Eigen::Index b = 0; b < boot.n_draws(); ++b) v[static_cast<std::size_t>(b)] = boot.estimates(static_cast<Eigen::Index>(s), b);
    return v;
}

std::string subset_text(const std::vector<std::string>& z) {
    std::string s;
    for (std::size_t i = 0; i < z.size(); ++i) s += (i ? "," : "") + z[i];
    return s;
}

}  // namespace

std::vector<double> loess_smooth(std::span<const double> xs, std::span<const double> ys, double span) {
    if (xs.size() != ys.size()) throw ConfigError("loess inputs differ in length");
    if (!(span > 0.0 && span <= 1.0)) throw ConfigError("loess span must lie in (0, 1]");
    const std::size_t n = xs.size();
    if (n < 3) throw ConfigError("loess needs at least 3 points");
    const auto q = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(span * static_cast<double>(n))));
    std::vector<double> out(n);
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) dist[j] = std::abs(xs[j] - xs[i]);
        std::vector<double> sorted = dist;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(std::min(q, n) - 1), sorted.end());
        double h = sorted[std::min(q, n) - 1];
        double sw = 0.0, sx = 0.0, sy = 0.0;
        std::vector<double> w(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double u = h > 0.0 ? dist[j] / h : (dist[j] == 0.0 ? 0.0 : 1.0);
            if (u >= 1.0) continue;
            const double t = 1.0 - u * u * u;
            w[j] = t * t * t;
            sw += w[j];
            sx += w[j] * xs[j];
            sy += w[j] * ys[j];
        }
        if (sw == 0.0) {
            // All neighbours sit exactly on the bandwidth edge; fall back to them equally weighted.
            for (std::size_t j = 0; j < n; ++j) {
                if (dist[j] <= h) { w[j] = 1.0; sw += 1.0; sx += xs[j]; sy += ys[j]; }
            }
        }
        const double mx = sx / sw;
        const double my = sy / sw;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (w[j] == 0.0) continue;
            sxx += w[j] * (xs[j] - mx) * (xs[j] - mx);
            sxy += w[j] * (xs[j] - mx) * (ys[j] - my);
        }
        const double slope = sxx > 1e-14 * sw * (1.0 + mx * mx) ? sxy / sxx : 0.0;
        out[i] = my + slope * (xs[i] - mx);
    }
    return out;
}

ChartFormat parse_chart_format(const std::string& s) {
    if (s == "svg") return ChartFormat::svg;
    if (s == "pdf-data") return ChartFormat::pdf_data;
    throw ConfigError("unknown chart format '" + s + "' (expected svg or pdf-data)");
}

std::vector<std::size_t> curve_order(const BootstrapMatrix& boot) {
    const auto n = static_cast<std::size_t>(boot.n_specs());
    std::vector<double> med(n, kNaN);
    for (std::size_t s = 0; s < n; ++s) {
        const auto v = row_values(boot, s);
        if (std::any_of(v.begin(), v.end(), [](double x) { return !std::isnan(x); })) med[s] = empirical_quantile(v, 0.5);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const bool na = std::isnan(med[a]);
        const bool nb = std::isnan(med[b]);
        if (na != nb) return nb;
        if (na) return false;
        return med[a] < med[b];
    });
    return order;
}

std::vector<std::size_t> resolve_highlights(const CurveResults& res,
                                            const std::vector<std::vector<std::string>>& extra) {
    const auto& specs = res.space.specs;
    std::vector<std::size_t> out;
    auto push = [&](std::size_t i) {
        if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
    };
    if (specs.empty()) return out;
    const std::size_t first_y = specs.front().y_option;
    const bool multi = res.space.mode == OutcomeMode::multi_y;
    // Full model: in multi-outcome runs, every outcome with every control.
    std::optional<std::size_t> full, none;
    std::size_t widest_y = 0;
    for (const auto& s : specs) widest_y = std::max(widest_y, s.y_subset.size());
    for (const auto& s : specs) {
        const bool all_y = !multi || s.y_subset.size() == widest_y;
        if (all_y && (!full || s.z_subset.size() > specs[*full].z_subset.size())) full = s.index;
        if (s.y_option == first_y && s.z_subset.empty() && !none) none = s.index;
    }
    if (full) push(*full);
    if (none) push(*none);

    for (const auto& want : extra) {
        std::vector<std::string> sorted_want = want;
        std::sort(sorted_want.begin(), sorted_want.end());
        bool found = false;
        for (const auto& s : specs) {
            if (s.y_option != first_y) continue;
            std::vector<std::string> z = s.z_subset;
            std::sort(z.begin(), z.end());
            if (z == sorted_want) {
                push(s.index);
                found = true;
                break;
            }
        }
        if (!found) {
            std::string msg = "unknown highlight specification [" + subset_text(want) + "]; valid subsets:";
            std::size_t listed = 0;
            for (const auto& s : specs) {
                if (s.y_option != first_y) continue;
                if (listed == 64) {
                    msg += " ...";
                    break;
                }
                msg += " [" + subset_text(s.z_subset) + "]";
                ++listed;
            }
            throw ConfigError(msg);
        }
    }
    return out;
}

std::vector<std::string> emit_charts(const CurveResults& res, const ChartOptions& options,
                                     const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create chart directory " + dir.string() + ": " + ec.message());
    if (!(options.ci > 0.0 && options.ci <= 1.0)) throw ConfigError("ci must lie in (0, 1]");
    const bool multi = res.space.mode == OutcomeMode::multi_y;
    const bool odds = options.odds_ratio;
    if (odds && res.space.estimator != Estimator::logistic) {
        throw ConfigError("odds ratios are only defined for logistic runs");
    }
    const auto highlights = resolve_highlights(res, options.highlight);
    const auto n = res.specs.size();

    std::vector<std::string> written;
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw DataError("cannot write " + (dir / name).string());
        out << text;
        written.push_back(name);
    };
    const bool svg = options.format == ChartFormat::svg;
    auto highlight_rank = [&](std::size_t s) -> long {
        const auto it = std::find(highlights.begin(), highlights.end(), s);
        return it == highlights.end() ? -1 : static_cast<long>(it - highlights.begin());
    };

    auto bands = confidence_band(res.boot, options.ci);
    std::vector<double> est = res.estimates();
    if (odds) {
        const auto v = odds_ratio_view(est, bands);
        est = v.estimates;
        bands = v.bands;
    }
    std::vector<double> fit(n, kNaN), loglik(n, kNaN), med(n, kNaN);
    for (std::size_t i = 0; i < n; ++i) {
        if (res.specs[i].metrics) {
            fit[i] = res.specs[i].metrics->fit_measure();
            loglik[i] = res.specs[i].metrics->loglik;
        }
        med[i] = bands[i].median;
    }
    const std::string est_label = odds ? "odds ratio" : "estimate";

    // a: in-sample fit against bootstrapped estimands.
    {
        std::ostringstream csv;
        csv << "index,median_estimate,fit\n";
        Svg s("a. in-sample fit vs bootstrapped estimands", "median " + est_label,
              res.space.estimator == Estimator::logistic ? "McFadden R2" : "adjusted R2");
        s.fit(med, fit);
        for (std::size_t i = 0; i < n; ++i) {
            csv << i << "," << num(med[i]) << "," << num(fit[i]) << "\n";
            const long h = highlight_rank(i);
            s.point(med[i], fit[i], h >= 0 ? highlight_colour(static_cast<std::size_t>(h)) : "#555555", h >= 0 ? 4.0 : 2.5);
        }
        write("panel_a.csv", csv.str());
        if (svg) write("panel_a.svg", s.str());
    }

    if (!multi) {
        // b: full-sample estimand against log-likelihood.
        std::ostringstream csv;
        csv << "index,estimate,loglik\n";
        Svg s("b. full-sample estimates vs log-likelihood", est_label, "log-likelihood");
        s.fit(est, loglik);
        for (std::size_t i = 0; i < n; ++i) {
            csv << i << "," << num(est[i]) << "," << num(loglik[i]) << "\n";
            const long h = highlight_rank(i);
            s.point(est[i], loglik[i], h >= 0 ? highlight_colour(static_cast<std::size_t>(h)) : "#555555", h >= 0 ? 4.0 : 2.5);
        }
        write("panel_b.csv", csv.str());
        if (svg) write("panel_b.svg", s.str());

        // c: BMA inclusion probabilities and averaged coefficients.
        std::ostringstream c;
        c << "control,inclusion,averaged_beta\n";
        const auto& bm = res.bma;
        Svg sc("c. BMA inclusion probability", "control", "inclusion");
        std::vector<double> xs(bm.names.size());
        std::iota(xs.begin(), xs.end(), 0.0);
        std::vector<double> ys = bm.inclusion;
        ys.push_back(0.0);
        xs.push_back(static_cast<double>(bm.names.size()));
        sc.fit(xs, ys);
        for (std::size_t k = 0; k < bm.names.size(); ++k) {
            c << bm.names[k] << "," << num(bm.inclusion[k]) << "," << num(bm.averaged_beta[k]) << "\n";
            sc.bar(static_cast<double>(k) + 0.1, static_cast<double>(k) + 0.9, bm.inclusion[k], "#4c72b0");
            sc.label(static_cast<double>(k) + 0.1, 0.0, bm.names[k]);
        }
        write("panel_c.csv", c.str());
        if (svg) write("panel_c.svg", sc.str());
    }

    // d: SHAP summary on the full model.
    {
        std::ostringstream csv;
        csv << "feature,row,phi,value\n";
        Svg s("d. SHAP values (full model)", "phi", "feature");
        if (res.shap) {
            const auto& sh = *res.shap;
            std::vector<double> all_phi(sh.phi.data(), sh.phi.data() + sh.phi.size());
            std::vector<double> ys{0.0, static_cast<double>(sh.feature_names.size())};
            s.fit(all_phi, ys);
            for (Eigen::Index f = 0; f < sh.phi.cols(); ++f) {
                const auto& name = sh.feature_names[static_cast<std::size_t>(f)];
                for (Eigen::Index r = 0; r < sh.phi.rows(); ++r) {
                    csv << name << "," << sh.test_rows[static_cast<std::size_t>(r)] << "," << num(sh.phi(r, f)) << ","
                        << num(sh.test_features(r, f)) << "\n";
                    s.point(sh.phi(r, f), static_cast<double>(f) + 0.5, "#8172b2", 2.0);
                }
                s.label(all_phi.empty() ? 0.0 : *std::min_element(all_phi.begin(), all_phi.end()),
                        static_cast<double>(f) + 0.7, name);
            }
        }
        write("panel_d.csv", csv.str());
        if (svg) write("panel_d.svg", s.str());
    }

    // e: distribution of the averaged OOS metric.
    {
        const auto oos = res.oos_averages();
        const auto h = histogram(oos, 20);
        std::ostringstream csv;
        csv << "bin_low,bin_high,count\n";
        Svg s(std::string("e. OOS ") + to_string(res.config.oos_metric), to_string(res.config.oos_metric), "specs");
        std::vector<double> xs = h.lo;
        xs.insert(xs.end(), h.hi.begin(), h.hi.end());
        std::vector<double> ys = h.count;
        ys.push_back(0.0);
        s.fit(xs, ys);
        for (std::size_t k = 0; k < h.count.size(); ++k) {
            csv << num(h.lo[k]) << "," << num(h.hi[k]) << "," << num(h.count[k]) << "\n";
            s.bar(h.lo[k], h.hi[k], h.count[k], "#55a868");
        }
        write("panel_e.csv", csv.str());
        if (svg) write("panel_e.svg", s.str());
    }

    // f: the specification curve.
    const auto order = curve_order(res.boot);
    {
        std::vector<double> rank(n), lo(n), md(n), hi(n);
        for (std::size_t r = 0; r < n; ++r) {
            rank[r] = static_cast<double>(r + 1);
            lo[r] = bands[order[r]].low;
            md[r] = bands[order[r]].median;
            hi[r] = bands[order[r]].high;
        }
        std::vector<double> slo, smd, shi;
        const bool smooth = options.loess && n >= 3 &&
                            std::none_of(md.begin(), md.end(), [](double v) { return std::isnan(v); });
        if (smooth) {
            slo = loess_smooth(rank, lo);
            smd = loess_smooth(rank, md);
            shi = loess_smooth(rank, hi);
        }
        std::ostringstream csv;
        csv << "rank,index,low,median,high";
        if (smooth) csv << ",low_smooth,median_smooth,high_smooth";
        csv << ",highlight\n";
        Svg s("f. specification curve", "specification rank", est_label);
        std::vector<double> ys = lo;
        ys.insert(ys.end(), hi.begin(), hi.end());
        s.fit(rank, ys);
        s.polyline(rank, smooth ? slo : lo, "#999999", true);
        s.polyline(rank, smooth ? shi : hi, "#999999", true);
        s.polyline(rank, smooth ? smd : md, "#000000");
        for (std::size_t r = 0; r < n; ++r) {
            const long h = highlight_rank(order[r]);
            csv << r + 1 << "," << order[r] << "," << num(lo[r]) << "," << num(md[r]) << "," << num(hi[r]);
            if (smooth) csv << "," << num(slo[r]) << "," << num(smd[r]) << "," << num(shi[r]);
            csv << "," << h << "\n";
            if (h >= 0) s.point(rank[r], md[r], highlight_colour(static_cast<std::size_t>(h)), 4.0);
        }
        write("panel_f.csv", csv.str());
        if (svg) write("panel_f.svg", s.str());
    }

    // g: bootstrap distributions of the highlighted specs.
    {
        std::ostringstream csv;
        csv << "highlight,index,label,bin_low,bin_high,count\n";
        Svg s("g. highlighted specifications: bootstrap draws", est_label, "draws");
        std::vector<Histogram> hs;
        std::vector<double> xs, ys{0.0};
        for (auto i : highlights) {
            auto v = row_values(res.boot, i);
            if (odds) for (auto& x : v) x = std::exp(x);
            hs.push_back(histogram(v, 30));
            xs.insert(xs.end(), hs.back().lo.begin(), hs.back().lo.end());
            xs.insert(xs.end(), hs.back().hi.begin(), hs.back().hi.end());
            ys.insert(ys.end(), hs.back().count.begin(), hs.back().count.end());
        }
        s.fit(xs, ys);
        for (std::size_t k = 0; k < highlights.size(); ++k) {
            const auto& h = hs[k];
            const auto label = spec_label(res.space, res.space.specs[highlights[k]]);
            std::vector<double> mid, cnt;
            for (std::size_t b = 0; b < h.count.size(); ++b) {
                csv << k << "," << highlights[k] << ",\"" << label << "\"," << num(h.lo[b]) << "," << num(h.hi[b]) << ","
                    << num(h.count[b]) << "\n";
                mid.push_back(0.5 * (h.lo[b] + h.hi[b]));
                cnt.push_back(h.count[b]);
            }
            s.polyline(mid, cnt, highlight_colour(k));
        }
        write("panel_g.csv", csv.str());
        if (svg) write("panel_g.svg", s.str());
    }

    // h: where the highlighted specs sit on the chosen information criterion.
    if (!multi) {
        const auto ic = res.criterion(options.ic);
        std::vector<std::size_t> by_ic(n);
        std::iota(by_ic.begin(), by_ic.end(), 0);
        std::stable_sort(by_ic.begin(), by_ic.end(), [&](std::size_t a, std::size_t b) {
            if (std::isnan(ic[a]) != std::isnan(ic[b])) return std::isnan(ic[b]);
            return !std::isnan(ic[a]) && ic[a] < ic[b];
        });
        std::ostringstream csv;
        csv << "rank,index," << options.ic << ",highlight\n";
        Svg s("h. highlighted specifications by " + options.ic, "rank", options.ic);
        std::vector<double> rank(n), vals(n);
        for (std::size_t r = 0; r < n; ++r) {
            rank[r] = static_cast<double>(r + 1);
            vals[r] = ic[by_ic[r]];
        }
        s.fit(rank, vals);
        s.polyline(rank, vals, "#555555");
        for (std::size_t r = 0; r < n; ++r) {
            const long h = highlight_rank(by_ic[r]);
            csv << r + 1 << "," << by_ic[r] << "," << num(vals[r]) << "," << h << "\n";
            if (h >= 0) s.point(rank[r], vals[r], highlight_colour(static_cast<std::size_t>(h)), 4.0);
        }
        write("panel_h.csv", csv.str());
        if (svg) write("panel_h.svg", s.str());
    }
    return written;
}

}  // namespace specurve
