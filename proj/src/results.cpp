#include "specurve/results.hpp"

#include "specurve/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace specurve {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fixed4(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

std::string py_list(const std::vector<std::string>& items) {
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ", ";
        s += "'" + items[i] + "'";
    }
    return s + "]";
}

double num(const json& j) {
    return j.is_null() ? kNaN : j.get<double>();
}

json num_array(std::span<const double> v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

std::vector<double> to_doubles(const json& j) {
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(num(e));
    return v;
}

json matrix_rows(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from(const json& rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = r ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto& row = rows.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != c) throw DataError("ragged matrix in results file");
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = num(row.at(static_cast<std::size_t>(k)));
    }
    return m;
}

json optional_num(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::vector<std::string> spec_members(const CurveResults& res, std::size_t i) {
    const auto& spec = res.space.specs[i];
    if (res.space.mode == OutcomeMode::single_y) return spec.z_subset;
    std::vector<std::string> out = spec.y_subset;
    out.insert(out.end(), spec.z_subset.begin(), spec.z_subset.end());
    return out;
}

}  // namespace

void RunConfig::validate() const {
    if (y_cols.empty()) throw ConfigError("at least one dependent variable is required");
    if (x_cols.empty()) throw ConfigError("at least one independent variable is required");
    if (draws < 1) throw ConfigError("draws must be at least 1");
    if (kfold < 2) throw ConfigError("kfold must be at least 2");
    if (!(ci > 0.0 && ci <= 1.0)) throw ConfigError("ci must lie in (0, 1]");
    if (n_cpu < 1) throw ConfigError("n_cpu must be at least 1");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("significance threshold must lie in (0, 1)");
    if (mode == OutcomeMode::single_y && y_cols.size() != 1) {
        throw ConfigError("single-outcome mode takes exactly one dependent variable");
    }
    if (requires_binary(oos_metric) && estimator != Estimator::logistic) {
        throw ConfigError(std::string("OOS metric ") + to_string(oos_metric) + " requires the logistic estimator");
    }
}

std::vector<double> CurveResults::estimates() const {
    std::vector<double> v;
    v.reserve(specs.size());
    for (const auto& s : specs) v.push_back(s.fitted ? s.estimate : kNaN);
    return v;
}

std::vector<double> CurveResults::pvalues() const {
    std::vector<double> v;
    v.reserve(specs.size());
    for (const auto& s : specs) v.push_back(s.fitted ? s.pvalue : kNaN);
    return v;
}

std::vector<double> CurveResults::criterion(const std::string& which) const {
    std::vector<double> v;
    v.reserve(specs.size());
    for (const auto& s : specs) {
        if (!s.metrics) {
            v.push_back(kNaN);
        } else if (which == "aic") {
            v.push_back(s.metrics->aic);
        } else if (which == "bic") {
            v.push_back(s.metrics->bic);
        } else if (which == "hqic") {
            v.push_back(s.metrics->hqic);
        } else {
            throw ConfigError("unknown information criterion '" + which + "' (expected aic, bic or hqic)");
        }
    }
    return v;
}

std::vector<double> CurveResults::oos_averages() const {
    std::vector<double> v;
    v.reserve(specs.size());
    for (const auto& s : specs) v.push_back(s.oos ? s.oos->cv_average : kNaN);
    return v;
}

std::string round4(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    const double r = std::strtod(buf, nullptr);
    char out[64];
    const auto res = std::to_chars(out, out + sizeof out, r);
    std::string s(out, res.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string summary(const CurveResults& res) {
    std::ostringstream o;
    const std::string sep(30, '=');
    const auto& ci = res.inference;
    const auto& obs = ci.observed;
    const auto& pool = ci.pooled_bootstrap;
    const bool logistic = res.space.estimator == Estimator::logistic;

    std::string ys;
    for (std::size_t i = 0; i < res.config.y_cols.size(); ++i) ys += (i ? ", " : "") + res.config.y_cols[i];

    o << sep << "\n1. Model Summary\n" << sep << "\n";
    o << "Model: " << (logistic ? "Logistic Robust" : "OLS Robust") << "\n";
    o << "Inference Tests: Yes\n";
    o << "Dependent variable: " << ys << "\n";
    o << "Independent variable: " << res.space.focal() << "\n";
    o << "Number of possible controls: " << res.space.z_pool.size() << "\n";
    o << "Number of draws: " << res.config.draws << "\n";
    o << "Number of folds: " << res.config.kfold << "\n";
    o << "Number of specifications: " << res.space.size() << "\n";
    o << sep << "\n2.Model Robustness Metrics\n" << sep << "\n2.1 Inference Metrics\n" << sep << "\n";

    auto pv = [&](std::size_t k) { return " (p-value: " + round4(ci.null_pvals[k]) + ")"; };
    const std::string ns = " (all specifications, no resampling): ";
    const std::string bs = " (all bootstraps and specifications): ";
    o << "Median beta" << ns << round4(obs.s[0]) << pv(0) << "\n";
    o << "Median beta" << bs << round4(pool.s[0]) << "\n";
    o << "Min beta" << ns << round4(obs.s[1]) << "\n";
    o << "Min beta" << bs << round4(pool.s[1]) << "\n";
    o << "Max beta" << ns << round4(obs.s[2]) << "\n";
    o << "Max beta" << bs << round4(pool.s[2]) << "\n";
    o << "AIC-weighted beta" << ns << round4(res.bma.aic_weighted) << "\n";
    o << "BIC-weighted beta" << ns << round4(res.bma.bic_weighted) << "\n";
    o << "HQIC-weighted beta" << ns << round4(res.bma.hqic_weighted) << "\n";
    const std::pair<const char*, std::size_t> portions[] = {
        {"Significant", 5}, {"Positive", 3}, {"Negative", 4},
        {"Positive and Significant", 6}, {"Negative and Significant", 7},
    };
    for (const auto& [label, k] : portions) {
        o << label << " portion of beta" << ns << round4(obs.share(k)) << pv(k) << "\n";
        o << label << " portion of beta" << bs << round4(pool.share(k)) << "\n";
    }
    o << "Stouffers Z-score test: " << round4(ci.stouffer.z) << ", " << round4(ci.stouffer.p) << "\n";

    o << sep << "\n2.2 In-Sample Metrics (Full Sample)\n" << sep << "\n";
    std::vector<std::optional<InSampleMetrics>> ms;
    ms.reserve(res.specs.size());
    for (const auto& s : res.specs) ms.push_back(s.metrics);
    const auto ext = select_extremes(ms);
    auto line = [&](const char* label, const std::optional<Extreme>& e) {
        o << label << ": ";
        if (e) o << fixed4(e->value) << ", Specs: " << py_list(spec_members(res, e->index));
        else o << "nan, Specs: []";
        o << "\n";
    };
    line("Min AIC", ext.min_aic);
    line("Min BIC", ext.min_bic);
    line("Min HQIC", ext.min_hqic);
    line("Max Log Likelihood", ext.max_loglik);
    line("Min Log Likelihood", ext.min_loglik);
    line(logistic ? "Max McFadden-R2" : "Max Adj-R", ext.max_fit);
    line(logistic ? "Min McFadden-R2" : "Min Adj-R", ext.min_fit);

    o << sep << "\n2.3 Out-Of-Sample Metrics (" << to_string(res.config.oos_metric) << " averaged across folds)\n"
      << sep << "\n";
    const auto oos = res.oos_averages();
    const auto mx = arg_max(oos);
    const auto mn = arg_min(oos);
    o << "Max Average: " << (mx ? fixed4(mx->value) + ", Specs: " + py_list(spec_members(res, mx->index)) : "nan")
      << " \n";
    o << "Min Average: " << (mn ? fixed4(mn->value) + ", Specs: " + py_list(spec_members(res, mn->index)) : "nan")
      << " \n";
    std::vector<double> finite;
    for (double v : oos) {
        if (!std::isnan(v)) finite.push_back(v);
    }
    double mean = kNaN;
    double median = kNaN;
    if (!finite.empty()) {
        mean = 0.0;
        for (double v : finite) mean += v;
        mean /= static_cast<double>(finite.size());
        median = empirical_quantile(finite, 0.5);
    }
    o << "Mean Average: " << fixed4(mean) << "\n";
    o << "Median Average: " << fixed4(median) << "\n";
    return o.str();
}

void recompute_curve(CurveResults& res) {
    const auto est = res.estimates();
    const auto pv = res.pvalues();
    const bool descriptive = res.config.group.has_value() || res.space.estimator == Estimator::logistic;
    res.inference = curve_inference(est, pv, res.boot, res.null_boot, res.config.threshold, descriptive);

    std::vector<CoefMap> coefs(res.specs.size());
    for (std::size_t i = 0; i < res.specs.size(); ++i) {
        const auto& s = res.specs[i];
        for (std::size_t k = 0; k < s.coef_names.size(); ++k) coefs[i].emplace_back(s.coef_names[k], s.coef_values[k]);
    }
    const auto bics = res.criterion("bic");
    bool any = std::any_of(bics.begin(), bics.end(), [](double v) { return std::isfinite(v); });
    if (!any) {
        res.bma = BMAResult{};
        res.bma.names = res.space.z_pool;
        res.bma.aic_weighted = res.bma.bic_weighted = res.bma.hqic_weighted = kNaN;
        return;
    }
    res.bma = bma(res.space.z_pool, bics, coefs);
    auto weighted = [&](const char* which) {
        const auto ic = res.criterion(which);
        if (std::none_of(ic.begin(), ic.end(), [](double v) { return std::isfinite(v); })) return kNaN;
        return ic_weighted_focal(est, ic);
    };
    res.bma.aic_weighted = weighted("aic");
    res.bma.bic_weighted = weighted("bic");
    res.bma.hqic_weighted = weighted("hqic");
}

std::string to_json(const CurveResults& res) {
    json j;
    j["schema"] = "specurve.results";
    j["version"] = kSchemaVersion;

    const auto& c = res.config;
    j["config"] = {
        {"data_path", c.data_path},
        {"y_cols", c.y_cols},
        {"x_cols", c.x_cols},
        {"z_cols", c.z_cols},
        {"group", c.group ? json(*c.group) : json(nullptr)},
        {"na_markers", c.na_markers},
        {"estimator", to_string(c.estimator)},
        {"multi_y", c.mode == OutcomeMode::multi_y},
        {"draws", c.draws},
        {"kfold", c.kfold},
        {"seed", c.seed},
        {"ci", c.ci},
        {"oos_metric", to_string(c.oos_metric)},
        {"sample_y", c.sample_y ? json(*c.sample_y) : json(nullptr)},
        {"sample_z", c.sample_z ? json(*c.sample_z) : json(nullptr)},
        {"aic_penalty", to_string(c.aic_penalty)},
        {"threshold", c.threshold},
    };

    j["space"] = {
        {"y_options", res.space.y_options},
        {"x_cols", res.space.x_cols},
        {"z_pool", res.space.z_pool},
    };

    json specs = json::array();
    for (std::size_t i = 0; i < res.specs.size(); ++i) {
        const auto& sp = res.space.specs[i];
        const auto& r = res.specs[i];
        json e = {
            {"index", sp.index},
            {"y_option", sp.y_option},
            {"z_mask", sp.z_mask},
            {"y_subset", sp.y_subset},
            {"z_subset", sp.z_subset},
            {"has_intercept", sp.has_intercept},
            {"fitted", r.fitted},
            {"reject_reason", r.reject_reason},
            {"n", r.n},
            {"p", r.p},
            {"estimate", r.fitted ? json(r.estimate) : json(nullptr)},
            {"se", r.fitted ? json(r.se) : json(nullptr)},
            {"pvalue", r.fitted ? json(r.pvalue) : json(nullptr)},
            {"coef_names", r.coef_names},
            {"coef_values", num_array(r.coef_values)},
        };
        if (r.metrics) {
            const auto& m = *r.metrics;
            e["in_sample"] = {
                {"adj_r2", optional_num(m.adj_r2)},
                {"mcfadden_r2", optional_num(m.mcfadden_r2)},
                {"loglik", m.loglik},
                {"aic", m.aic},
                {"bic", m.bic},
                {"hqic", m.hqic},
                {"n", m.n},
                {"p", m.p},
            };
        } else {
            e["in_sample"] = nullptr;
        }
        if (r.oos) {
            std::vector<int> flagged(r.oos->flagged.begin(), r.oos->flagged.end());
            e["oos"] = {
                {"per_fold", num_array(r.oos->per_fold)},
                {"flagged", flagged},
                {"rejected_folds", r.oos->rejected_folds},
                {"average", r.oos->cv_average},
            };
        } else {
            e["oos"] = nullptr;
        }
        specs.push_back(std::move(e));
    }
    j["specs"] = std::move(specs);

    j["bootstrap"] = {{"estimates", matrix_rows(res.boot.estimates)}, {"pvalues", matrix_rows(res.boot.pvalues)}};
    j["null_bootstrap"] = {{"estimates", matrix_rows(res.null_boot.estimates)},
                           {"pvalues", matrix_rows(res.null_boot.pvalues)}};

    const auto& ci = res.inference;
    json functionals = json::object();
    for (std::size_t k = 0; k < kFunctionals; ++k) {
        functionals[functional_name(k)] = {
            {"observed", ci.observed.s[k]},
            {"bootstrap", ci.pooled_bootstrap.s[k]},
            {"null_pvalue", ci.null_pvals[k]},
        };
    }
    j["inference"] = {
        {"functionals", functionals},
        {"defined", ci.observed.defined},
        {"bootstrap_defined", ci.pooled_bootstrap.defined},
        {"stouffer_z", ci.stouffer.z},
        {"stouffer_p", ci.stouffer.p},
        {"descriptive", ci.descriptive},
        {"threshold", ci.threshold},
    };

    j["bma"] = {
        {"weights", num_array(res.bma.weights)},
        {"names", res.bma.names},
        {"averaged_beta", num_array(res.bma.averaged_beta)},
        {"inclusion", num_array(res.bma.inclusion)},
        {"aic_weighted", res.bma.aic_weighted},
        {"bic_weighted", res.bma.bic_weighted},
        {"hqic_weighted", res.bma.hqic_weighted},
    };

    if (res.shap) {
        const auto& s = *res.shap;
        j["shap"] = {
            {"phi", matrix_rows(s.phi)},
            {"feature_names", s.feature_names},
            {"feature_means", num_array(std::span<const double>(s.feature_means.data(), s.feature_means.size()))},
            {"test_features", matrix_rows(s.test_features)},
            {"prediction", num_array(std::span<const double>(s.prediction.data(), s.prediction.size()))},
            {"base_value", s.base_value},
            {"test_rows", s.test_rows},
        };
    } else {
        j["shap"] = nullptr;
    }

    j["diagnostics"] = {
        {"warnings", res.diagnostics.warnings},
        {"rejected_specs", res.diagnostics.rejected_specs},
        {"singleton_groups", res.diagnostics.singleton_groups},
    };
    return j.dump(1) + "\n";
}

CurveResults from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("results file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("schema") != "specurve.results") throw DataError("not a results file");
        if (j.at("version").get<int>() != kSchemaVersion) {
            throw DataError("unsupported results schema version " + j.at("version").dump());
        }
        CurveResults res;
        const auto& c = j.at("config");
        auto& cfg = res.config;
        cfg.data_path = c.at("data_path").get<std::string>();
        cfg.y_cols = c.at("y_cols").get<std::vector<std::string>>();
        cfg.x_cols = c.at("x_cols").get<std::vector<std::string>>();
        cfg.z_cols = c.at("z_cols").get<std::vector<std::string>>();
        if (!c.at("group").is_null()) cfg.group = c.at("group").get<std::string>();
        cfg.na_markers = c.at("na_markers").get<std::vector<std::string>>();
        cfg.estimator = parse_estimator(c.at("estimator").get<std::string>());
        cfg.mode = c.at("multi_y").get<bool>() ? OutcomeMode::multi_y : OutcomeMode::single_y;
        cfg.draws = c.at("draws").get<std::size_t>();
        cfg.kfold = c.at("kfold").get<std::size_t>();
        cfg.seed = c.at("seed").get<std::uint64_t>();
        cfg.ci = c.at("ci").get<double>();
        cfg.oos_metric = parse_oos_metric(c.at("oos_metric").get<std::string>());
        if (!c.at("sample_y").is_null()) cfg.sample_y = c.at("sample_y").get<std::size_t>();
        if (!c.at("sample_z").is_null()) cfg.sample_z = c.at("sample_z").get<std::uint64_t>();
        cfg.aic_penalty = parse_aic_penalty(c.at("aic_penalty").get<std::string>());
        cfg.threshold = c.at("threshold").get<double>();

        const auto& sp = j.at("space");
        res.space.y_options = sp.at("y_options").get<std::vector<std::vector<std::string>>>();
        res.space.x_cols = sp.at("x_cols").get<std::vector<std::string>>();
        res.space.z_pool = sp.at("z_pool").get<std::vector<std::string>>();
        res.space.estimator = cfg.estimator;
        res.space.mode = cfg.mode;

        for (const auto& e : j.at("specs")) {
            Specification s;
            s.index = e.at("index").get<std::size_t>();
            s.y_option = e.at("y_option").get<std::size_t>();
            s.z_mask = e.at("z_mask").get<std::uint64_t>();
            s.y_subset = e.at("y_subset").get<std::vector<std::string>>();
            s.z_subset = e.at("z_subset").get<std::vector<std::string>>();
            s.has_intercept = e.at("has_intercept").get<bool>();
            res.space.specs.push_back(std::move(s));

            SpecResult r;
            r.fitted = e.at("fitted").get<bool>();
            r.reject_reason = e.at("reject_reason").get<std::string>();
            r.n = e.at("n").get<std::size_t>();
            r.p = e.at("p").get<std::size_t>();
            r.estimate = num(e.at("estimate"));
            r.se = num(e.at("se"));
            r.pvalue = num(e.at("pvalue"));
            r.coef_names = e.at("coef_names").get<std::vector<std::string>>();
            r.coef_values = to_doubles(e.at("coef_values"));
            if (const auto& m = e.at("in_sample"); !m.is_null()) {
                InSampleMetrics im;
                if (!m.at("adj_r2").is_null()) im.adj_r2 = m.at("adj_r2").get<double>();
                if (!m.at("mcfadden_r2").is_null()) im.mcfadden_r2 = m.at("mcfadden_r2").get<double>();
                im.loglik = num(m.at("loglik"));
                im.aic = num(m.at("aic"));
                im.bic = num(m.at("bic"));
                im.hqic = num(m.at("hqic"));
                im.n = m.at("n").get<std::size_t>();
                im.p = m.at("p").get<std::size_t>();
                r.metrics = im;
            }
            if (const auto& o = e.at("oos"); !o.is_null()) {
                OOSMetrics om;
                om.metric = cfg.oos_metric;
                om.per_fold = to_doubles(o.at("per_fold"));
                for (const auto& f : o.at("flagged")) om.flagged.push_back(f.get<int>() != 0);
                om.rejected_folds = o.at("rejected_folds").get<std::size_t>();
                om.cv_average = num(o.at("average"));
                r.oos = std::move(om);
            }
            res.specs.push_back(std::move(r));
        }

        auto load_boot = [&](const json& b) {
            BootstrapMatrix m;
            m.estimates = matrix_from(b.at("estimates"));
            m.pvalues = matrix_from(b.at("pvalues"));
            m.rejected.assign(static_cast<std::size_t>(m.estimates.rows()), 0);
            for (Eigen::Index s = 0; s < m.estimates.rows(); ++s) {
                for (Eigen::Index d = 0; d < m.estimates.cols(); ++d) {
                    if (std::isnan(m.estimates(s, d))) ++m.rejected[static_cast<std::size_t>(s)];
                }
            }
            return m;
        };
        res.boot = load_boot(j.at("bootstrap"));
        res.null_boot = load_boot(j.at("null_bootstrap"));

        if (const auto& s = j.at("shap"); !s.is_null()) {
            ShapResult sh;
            sh.phi = matrix_from(s.at("phi"));
            sh.feature_names = s.at("feature_names").get<std::vector<std::string>>();
            const auto means = to_doubles(s.at("feature_means"));
            sh.feature_means = Eigen::Map<const Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
            sh.test_features = matrix_from(s.at("test_features"));
            const auto pred = to_doubles(s.at("prediction"));
            sh.prediction = Eigen::Map<const Eigen::VectorXd>(pred.data(), static_cast<Eigen::Index>(pred.size()));
            sh.base_value = num(s.at("base_value"));
            sh.test_rows = s.at("test_rows").get<std::vector<std::size_t>>();
            res.shap = std::move(sh);
        }

        const auto& d = j.at("diagnostics");
        res.diagnostics.warnings = d.at("warnings").get<std::vector<std::string>>();
        res.diagnostics.rejected_specs = d.at("rejected_specs").get<std::size_t>();
        res.diagnostics.singleton_groups = d.at("singleton_groups").get<std::size_t>();

        recompute_curve(res);
        return res;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed results file: ") + e.what());
    }
}

CurveResults load_results(const std::filesystem::path& results_json) {
    std::ifstream in(results_json, std::ios::binary);
    if (!in) throw DataError("cannot open " + results_json.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void export_results(const CurveResults& res, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw DataError("cannot write " + (dir / name).string());
        return out;
    };
    auto write_num = [](std::ostream& o, double v) {
        if (std::isnan(v)) return;
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        o.write(buf, r.ptr - buf);
    };

    {
        auto out = open("results.json");
        out << to_json(res);
    }
    {
        auto out = open("specs.csv");
        out << "index,y_subset,z_subset,estimate,se,pvalue,fit,loglik,aic,bic,hqic,oos_average,n,rejected\n";
        for (std::size_t i = 0; i < res.specs.size(); ++i) {
            const auto& sp = res.space.specs[i];
            const auto& r = res.specs[i];
            auto join = [](const std::vector<std::string>& v) {
                std::string s;
                for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ";" : "") + v[k];
                return "\"" + s + "\"";
            };
            out << sp.index << "," << join(sp.y_subset) << "," << join(sp.z_subset) << ",";
            write_num(out, r.fitted ? r.estimate : kNaN);
            out << ",";
            write_num(out, r.fitted ? r.se : kNaN);
            out << ",";
            write_num(out, r.fitted ? r.pvalue : kNaN);
            out << ",";
            write_num(out, r.metrics ? r.metrics->fit_measure() : kNaN);
            for (double v : {r.metrics ? r.metrics->loglik : kNaN, r.metrics ? r.metrics->aic : kNaN,
                             r.metrics ? r.metrics->bic : kNaN, r.metrics ? r.metrics->hqic : kNaN,
                             r.oos ? r.oos->cv_average : kNaN}) {
                out << ",";
                write_num(out, v);
            }
            out << "," << r.n << "," << r.reject_reason << "\n";
        }
    }
    {
        auto out = open("draws.csv");
        out << "index";
        for (Eigen::Index b = 0; b < res.boot.n_draws(); ++b) out << ",d" << b;
        out << "\n";
        for (Eigen::Index s = 0; s < res.boot.n_specs(); ++s) {
            out << s;
            for (Eigen::Index b = 0; b < res.boot.n_draws(); ++b) {
                out << ",";
                write_num(out, res.boot.estimates(s, b));
            }
            out << "\n";
        }
    }
}

CurveResults concat_results(const std::vector<CurveResults>& runs) {
    if (runs.empty()) throw ConfigError("nothing to concatenate");
    const auto& first = runs.front();
    CurveResults out;
    out.config = first.config;
    out.space.x_cols = first.space.x_cols;
    out.space.estimator = first.space.estimator;
    out.space.mode = first.space.mode;
    out.space.y_options = first.space.y_options;
    out.space.z_pool = first.space.z_pool;

    std::size_t total = 0;
    for (const auto& r : runs) {
        if (r.config.draws != first.config.draws || r.boot.n_draws() != first.boot.n_draws()) {
            throw ConfigError("cannot concatenate runs with different numbers of draws");
        }
        if (r.config.kfold != first.config.kfold) {
            throw ConfigError("cannot concatenate runs with different numbers of folds");
        }
        if (r.space.estimator != first.space.estimator) {
            throw ConfigError("cannot concatenate runs with different estimators");
        }
        if (r.space.x_cols.front() != first.space.x_cols.front()) {
            throw ConfigError("cannot concatenate runs with different focal predictors");
        }
        total += r.specs.size();
    }

    auto add_unique = [](std::vector<std::string>& to, const std::vector<std::string>& from) {
        for (const auto& n : from) {
            if (std::find(to.begin(), to.end(), n) == to.end()) to.push_back(n);
        }
    };
    const auto b = first.boot.n_draws();
    out.boot.estimates.resize(static_cast<Eigen::Index>(total), b);
    out.boot.pvalues.resize(static_cast<Eigen::Index>(total), b);
    out.null_boot.estimates.resize(static_cast<Eigen::Index>(total), first.null_boot.n_draws());
    out.null_boot.pvalues.resize(static_cast<Eigen::Index>(total), first.null_boot.n_draws());

    Eigen::Index row = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& run = runs[r];
        if (r > 0) {
            add_unique(out.space.z_pool, run.space.z_pool);
            add_unique(out.config.y_cols, run.config.y_cols);
            add_unique(out.config.z_cols, run.config.z_cols);
            for (const auto& y : run.space.y_options) {
                if (std::find(out.space.y_options.begin(), out.space.y_options.end(), y) == out.space.y_options.end()) {
                    out.space.y_options.push_back(y);
                }
            }
            if (run.null_boot.n_draws() != out.null_boot.n_draws()) {
                throw ConfigError("cannot concatenate runs with different numbers of null draws");
            }
        }
        for (std::size_t i = 0; i < run.specs.size(); ++i) {
            Specification s = run.space.specs[i];
            s.index = static_cast<std::size_t>(row);
            const auto it = std::find(out.space.y_options.begin(), out.space.y_options.end(), s.y_subset);
            s.y_option = static_cast<std::size_t>(it - out.space.y_options.begin());
            out.space.specs.push_back(std::move(s));
            out.specs.push_back(run.specs[i]);
            const auto src = static_cast<Eigen::Index>(i);
            out.boot.estimates.row(row) = run.boot.estimates.row(src);
            out.boot.pvalues.row(row) = run.boot.pvalues.row(src);
            out.null_boot.estimates.row(row) = run.null_boot.estimates.row(src);
            out.null_boot.pvalues.row(row) = run.null_boot.pvalues.row(src);
            out.boot.rejected.push_back(run.boot.rejected.empty() ? 0 : run.boot.rejected[i]);
            out.null_boot.rejected.push_back(run.null_boot.rejected.empty() ? 0 : run.null_boot.rejected[i]);
            ++row;
        }
        out.diagnostics.warnings.insert(out.diagnostics.warnings.end(), run.diagnostics.warnings.begin(),
                                        run.diagnostics.warnings.end());
        out.diagnostics.rejected_specs += run.diagnostics.rejected_specs;
        out.diagnostics.singleton_groups += run.diagnostics.singleton_groups;
    }
    // z_mask is only meaningful against one pool; rebuild it against the merged pool.
    for (auto& s : out.space.specs) {
        s.z_mask = 0;
        for (const auto& z : s.z_subset) {
            const auto it = std::find(out.space.z_pool.begin(), out.space.z_pool.end(), z);
            s.z_mask |= std::uint64_t{1} << (it - out.space.z_pool.begin());
        }
    }
    if (out.space.y_options.size() > 1 || out.config.y_cols.size() > 1) out.space.mode = OutcomeMode::multi_y;
    out.config.mode = out.space.mode;
    out.shap = first.shap;
    recompute_curve(out);
    return out;
}

OddsRatioView odds_ratio_view(std::span<const double> omegas, std::span<const Band> bands) {
    OddsRatioView v;
    v.estimates.reserve(omegas.size());
    for (double w : omegas) v.estimates.push_back(std::exp(w));
    v.bands.reserve(bands.size());
    for (const auto& b : bands) v.bands.push_back(Band{std::exp(b.low), std::exp(b.median), std::exp(b.high)});
    return v;
}

}  // namespace specurve
