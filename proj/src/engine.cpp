#include "specurve/engine.hpp"

#include "specurve/errors.hpp"
#include "specurve/parallel.hpp"
#include "specurve/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace specurve {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void rethrow_in_context(const std::string& where) {
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
    } catch (const std::exception& e) {
        throw NumericError(where + ": " + e.what());
    }
}

void check_columns(const RunConfig& cfg, const Dataset& ds) {
    std::vector<std::string> missing;
    auto check = [&](const std::vector<std::string>& cols) {
        for (const auto& c : cols) {
            if (!ds.has_column(c)) missing.push_back(c);
        }
    };
    check(cfg.y_cols);
    check(cfg.x_cols);
    check(cfg.z_cols);
    if (cfg.group && !ds.has_column(*cfg.group)) missing.push_back(*cfg.group);
    if (!missing.empty()) {
        std::string msg = "unknown column(s):";
        for (const auto& m : missing) msg += " '" + m + "'";
        throw ConfigError(msg);
    }
}

SpecSpace build_space(const RunConfig& cfg) {
    if (!cfg.sample_y && !cfg.sample_z) {
        return enumerate(cfg.y_cols, cfg.x_cols, cfg.z_cols, cfg.mode, cfg.estimator);
    }
    const std::size_t y_options =
        cfg.mode == OutcomeMode::single_y ? 1 : (std::size_t{1} << cfg.y_cols.size()) - 1;
    if (cfg.z_cols.size() >= 63) throw ConfigError("control pool too large (at most 62 columns)");
    const std::uint64_t z_subsets = std::uint64_t{1} << cfg.z_cols.size();
    return enumerate_sampled(cfg.y_cols, cfg.x_cols, cfg.z_cols, cfg.mode, cfg.estimator,
                             cfg.sample_y.value_or(y_options), cfg.sample_z.value_or(z_subsets), cfg.seed);
}

std::optional<std::size_t> full_spec_index(const SpecSpace& space) {
    std::optional<std::size_t> best;
    for (const auto& s : space.specs) {
        if (s.y_option != space.specs.front().y_option) continue;
        if (!best || s.z_subset.size() > space.specs[*best].z_subset.size()) best = s.index;
    }
    return best;
}

}  // namespace

CurveResults run(const RunConfig& config, const Dataset& input, const BootstrapHooks* hooks) {
    const auto t_start = Clock::now();
    config.validate();
    check_columns(config, input);
    const Dataset ds = input.with_group(config.group);
    const bool fixed_effects = config.group.has_value();

    CurveResults res;
    res.config = config;

    auto t0 = Clock::now();
    res.space = build_space(config);
    const std::size_t n_specs = res.space.size();
    res.timings["enumerate"] = seconds_since(t0);

    // Outcome per y option; a degenerate composite rejects all of its specs.
    t0 = Clock::now();
    std::vector<std::vector<double>> outcomes(res.space.y_options.size());
    std::vector<std::string> outcome_errors(res.space.y_options.size());
    for (std::size_t o = 0; o < res.space.y_options.size(); ++o) {
        const auto& members = res.space.y_options[o];
        try {
            if (config.mode == OutcomeMode::single_y) {
                const auto col = ds.column(members.front());
                outcomes[o].assign(col.begin(), col.end());
            } else {
                outcomes[o] = compose(ds, members);
            }
        } catch (const SpecRejected& e) {
            outcome_errors[o] = to_string(e.reason());
        }
    }

    std::vector<std::optional<PreparedSpec>> prepared(n_specs);
    res.specs.assign(n_specs, SpecResult{});
    std::vector<std::size_t> clamped(n_specs, 0);
    parallel_for(n_specs, config.n_cpu, [&](std::size_t i) {
        auto& spec = res.space.specs[i];
        auto& out = res.specs[i];
        if (!outcome_errors[spec.y_option].empty()) {
            out.reject_reason = outcome_errors[spec.y_option];
            return;
        }
        try {
            PreparedSpec ps(ds, outcomes[spec.y_option], res.space, spec, fixed_effects);
            const auto fit = ps.fit();
            const auto& dm = ps.design();
            spec.has_intercept = ps.raw().has_intercept;
            const auto focal = dm.focal_column();
            out.fitted = true;
            out.n = static_cast<std::size_t>(dm.N());
            out.p = static_cast<std::size_t>(dm.P());
            out.estimate = fit.beta(focal);
            out.se = fit.se(focal);
            out.pvalue = fit.pvalues(focal);
            out.coef_names = dm.column_names;
            out.coef_values.assign(fit.beta.data(), fit.beta.data() + fit.beta.size());

            InSampleMetrics m;
            m.loglik = fit.loglik;
            m.n = out.n;
            m.p = out.p;
            const auto ic = information_criteria(fit.loglik, m.n, m.p, config.aic_penalty);
            m.aic = ic.aic;
            m.bic = ic.bic;
            m.hqic = ic.hqic;
            if (config.estimator == Estimator::ols) {
                m.adj_r2 = adjusted_r2(dm.y, fit.fitted, out.p - (dm.has_intercept ? 1 : 0));
            } else {
                m.mcfadden_r2 = mcfadden_r2(dm.y, fit.fitted);
            }
            out.metrics = m;

            if (config.kfold <= out.n) {
                const auto plan = make_folds(out.n, config.kfold, derive_seed(config.seed, Stream::folds, out.n));
                out.oos = cv_evaluate(dm, plan, config.oos_metric, config.estimator);
                if (config.oos_metric == OosMetric::imv) {
                    clamped[i] = static_cast<std::size_t>(
                        std::count(out.oos->flagged.begin(), out.oos->flagged.end(), true)) - out.oos->rejected_folds;
                }
            }
            prepared[i].emplace(std::move(ps));
        } catch (const SpecRejected& e) {
            out = SpecResult{};
            out.reject_reason = to_string(e.reason());
        } catch (...) {
            rethrow_in_context("spec " + std::to_string(i) + " (fit)");
        }
    });
    res.timings["fit"] = seconds_since(t0);

    for (std::size_t i = 0; i < n_specs; ++i) {
        const auto& r = res.specs[i];
        if (!r.fitted) {
            ++res.diagnostics.rejected_specs;
            res.diagnostics.warnings.push_back("spec " + std::to_string(i) + " rejected: " + r.reject_reason);
            continue;
        }
        if (prepared[i]) res.diagnostics.singleton_groups = std::max(res.diagnostics.singleton_groups,
                                                                     prepared[i]->singleton_groups());
        if (!r.oos) {
            res.diagnostics.warnings.push_back("spec " + std::to_string(i) + ": fewer rows than folds, no OOS metric");
        } else if (r.oos->rejected_folds > 0) {
            res.diagnostics.warnings.push_back("spec " + std::to_string(i) + ": " +
                                               std::to_string(r.oos->rejected_folds) + " fold(s) rejected");
        }
        if (clamped[i] > 0) {
            res.diagnostics.warnings.push_back("spec " + std::to_string(i) + ": IMV weight clamped in " +
                                               std::to_string(clamped[i]) + " fold(s)");
        }
    }
    if (res.diagnostics.singleton_groups > 0) {
        res.diagnostics.warnings.push_back(std::to_string(res.diagnostics.singleton_groups) +
                                           " singleton group(s) demeaned to zero");
    }

    BootstrapOptions bo;
    bo.draws = config.draws;
    bo.seed = config.seed;
    bo.n_threads = config.n_cpu;
    bo.hooks = hooks;

    t0 = Clock::now();
    try {
        res.boot = bootstrap_estimands(prepared, ds.n_rows(), bo);
    } catch (...) {
        rethrow_in_context("bootstrap");
    }
    res.timings["bootstrap"] = seconds_since(t0);

    t0 = Clock::now();
    const auto est = res.estimates();
    try {
        res.null_boot = null_bootstrap(prepared, ds.n_rows(), est, bo);
    } catch (...) {
        rethrow_in_context("null bootstrap");
    }
    res.timings["null_bootstrap"] = seconds_since(t0);

    for (auto s : unstable_specs(res.boot)) {
        if (!res.specs[s].fitted) continue;
        res.diagnostics.warnings.push_back("spec " + std::to_string(s) + " rejected in " +
                                           std::to_string(res.boot.rejected[s]) + " of " +
                                           std::to_string(config.draws) + " bootstrap draws");
    }

    t0 = Clock::now();
    try {
        recompute_curve(res);
    } catch (...) {
        rethrow_in_context("inference");
    }
    res.timings["inference"] = seconds_since(t0);

    t0 = Clock::now();
    if (const auto full = full_spec_index(res.space); full && prepared[*full]) {
        try {
            res.shap = linear_shap(prepared[*full]->design(), config.estimator, config.seed);
        } catch (const SpecRejected& e) {
            res.diagnostics.warnings.push_back(std::string("SHAP skipped: ") + e.what());
        } catch (const ConfigError& e) {
            res.diagnostics.warnings.push_back(std::string("SHAP skipped: ") + e.what());
        }
    } else {
        res.diagnostics.warnings.push_back("SHAP skipped: full specification not fitted");
    }
    res.timings["shap"] = seconds_since(t0);
    res.timings["total"] = seconds_since(t_start);
    return res;
}

CurveResults run(const RunConfig& config) {
    if (config.data_path.empty()) throw ConfigError("no data file given");
    CsvOptions opt;
    opt.na_markers = config.na_markers;
    const Dataset ds = load_csv(config.data_path, opt);
    return run(config, ds);
}

Dataset synthetic_dataset(const SyntheticOptions& options) {
    Rng rng(derive_seed(options.seed, Stream::synthetic));
    const std::size_t n = options.n_rows;
    std::vector<Column> cols;
    cols.push_back({"y", std::vector<double>(n)});
    cols.push_back({"x1", std::vector<double>(n)});
    for (std::size_t j = 0; j < options.n_controls; ++j) cols.push_back({"z" + std::to_string(j + 1), std::vector<double>(n)});
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.normal();
        cols[1].values[i] = x;
        double lin = 1.0 + options.beta * x;
        for (std::size_t j = 0; j < options.n_controls; ++j) {
            const double z = rng.normal();
            cols[2 + j].values[i] = z;
            lin += 0.5 * z;
        }
        if (options.binary) {
            const double p = 1.0 / (1.0 + std::exp(-lin));
            cols[0].values[i] = rng.uniform() < p ? 1.0 : 0.0;
        } else {
            cols[0].values[i] = lin + 0.5 * rng.normal();
        }
    }
    return Dataset(std::move(cols));
}

std::vector<std::size_t> log_spaced(std::size_t lo, std::size_t hi, std::size_t count) {
    if (lo < 1 || hi < lo || count < 1) throw ConfigError("invalid log-spaced range");
    std::vector<std::size_t> out;
    const double a = std::log(static_cast<double>(lo));
    const double b = std::log(static_cast<double>(hi));
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        const auto v = static_cast<std::size_t>(std::llround(std::exp(a + t * (b - a))));
        if (out.empty() || out.back() != v) out.push_back(v);
    }
    return out;
}

double loglog_slope(const std::vector<ProfileCell>& cells) {
    // Cell-group fixed effects: centre within each (folds, controls) pair.
    std::vector<std::pair<std::size_t, std::size_t>> keys;
    for (const auto& c : cells) {
        const std::pair key{c.folds, c.controls};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& key : keys) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& c : cells) {
            if (c.folds == key.first && c.controls == key.second && c.median > 0.0) {
                pts.emplace_back(std::log(static_cast<double>(c.draws)), std::log(c.median));
            }
        }
        if (pts.size() < 2) continue;
        double mx = 0.0;
        double my = 0.0;
        for (const auto& [x, y] : pts) {
            mx += x;
            my += y;
        }
        mx /= static_cast<double>(pts.size());
        my /= static_cast<double>(pts.size());
        for (const auto& [x, y] : pts) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
        }
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

ProfileReport profile(const ProfileGrid& grid) {
    if (grid.draws.empty() || grid.folds.empty() || grid.controls.empty() || grid.repeats < 1) {
        throw ConfigError("profile grid needs draws, folds, controls and at least one repeat");
    }
    ProfileReport report;
    for (auto c : grid.controls) {
        SyntheticOptions so;
        so.n_rows = grid.n_rows;
        so.n_controls = c;
        so.binary = grid.estimator == Estimator::logistic;
        so.seed = grid.seed;
        const Dataset ds = synthetic_dataset(so);
        RunConfig cfg;
        cfg.y_cols = {"y"};
        cfg.x_cols = {"x1"};
        for (std::size_t j = 0; j < c; ++j) cfg.z_cols.push_back("z" + std::to_string(j + 1));
        cfg.estimator = grid.estimator;
        cfg.oos_metric = grid.estimator == Estimator::logistic ? OosMetric::cross_entropy : OosMetric::rmse;
        cfg.seed = grid.seed;
        cfg.n_cpu = grid.n_cpu;
        for (auto k : grid.folds) {
            cfg.kfold = k;
            for (auto b : grid.draws) {
                cfg.draws = b;
                std::vector<double> times;
                for (std::size_t r = 0; r < grid.repeats; ++r) {
                    const auto t0 = Clock::now();
                    const auto res = run(cfg, ds);
                    times.push_back(seconds_since(t0));
                }
                std::sort(times.begin(), times.end());
                ProfileCell cell;
                cell.draws = b;
                cell.folds = k;
                cell.controls = c;
                cell.min = times.front();
                cell.max = times.back();
                cell.median = empirical_quantile(times, 0.5);
                report.cells.push_back(cell);
            }
        }
    }
    report.slope = loglog_slope(report.cells);
    return report;
}

std::string format_profile(const ProfileReport& report) {
    std::ostringstream o;
    o << "draws,folds,controls,min_s,median_s,max_s\n";
    char buf[160];
    for (const auto& c : report.cells) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.6f,%.6f,%.6f\n", c.draws, c.folds, c.controls, c.min, c.median,
                      c.max);
        o << buf;
    }
    std::snprintf(buf, sizeof buf, "# log-log slope of runtime on draws: %.4f\n", report.slope);
    o << buf;
    return o.str();
}

}  // namespace specurve
