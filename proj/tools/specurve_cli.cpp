// specurve command-line driver: run, profile, charts, concat, summary.

#include "specurve/charts.hpp"
#include "specurve/engine.hpp"
#include "specurve/errors.hpp"

#include <CLI11.hpp>

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace sc = specurve;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return out;
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    for (auto& p : split(s, ',')) {
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

/// "z1,z2;z3" -> {{z1,z2},{z3}}
std::vector<std::vector<std::string>> parse_highlight(const std::string& s) {
    std::vector<std::vector<std::string>> out;
    if (s.empty()) return out;
    for (const auto& group : split(s, ';')) out.push_back(split_names(group));
    return out;
}

/// Flat key=value file turned into "--key value" arguments.
std::vector<std::string> config_file_args(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sc::ConfigError("cannot read config file " + path);
    std::vector<std::string> args;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw sc::ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        auto key = split(line.substr(0, eq), '\n').front();
        auto value = line.substr(eq + 1);
        while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        key.erase(key.find_last_not_of(" \t") + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        if (value == "true") {
            args.push_back("--" + key);
        } else if (value != "false") {
            args.push_back("--" + key);
            args.push_back(value);
        }
    }
    return args;
}

bool interactive() { return isatty(STDIN_FILENO) != 0; }

std::string prompt(const std::string& question, const std::string& fallback) {
    std::cerr << question << " [" << fallback << "]: " << std::flush;
    std::string answer;
    if (!std::getline(std::cin, answer)) return fallback;
    answer = split(answer, '\n').empty() ? "" : split(answer, '\n').front();
    return answer.empty() ? fallback : answer;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("SPECURVE_OUT_DIR"); env && *env) return env;
    return "specurve_out";
}

struct RunFlags {
    std::string data, na, group, y, x, controls, oos_metric, estimator = "ols", ext = "svg", highlight, ic = "bic";
    std::string aic_penalty = "observations", out;
    std::optional<std::size_t> draws, kfold, n_cpu, sample_y;
    std::optional<std::uint64_t> seed, sample_z;
    double ci = 1.0;
    double threshold = 0.05;
    bool multi_y = false, loess = false, odds = false, no_charts = false, quiet = false;
};

template <class T>
T ask_number(const std::string& what, const std::string& fallback) {
    const auto s = prompt(what, fallback);
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return static_cast<T>(v);
    } catch (const std::exception&) {
        throw sc::ConfigError("invalid value '" + s + "' for " + what);
    }
}

sc::RunConfig to_config(RunFlags& f) {
    sc::RunConfig c;
    c.data_path = f.data;
    if (!f.na.empty()) c.na_markers = split(f.na, ',');
    if (!f.group.empty()) c.group = f.group;
    c.y_cols = split_names(f.y);
    c.x_cols = split_names(f.x);
    c.z_cols = split_names(f.controls);
    c.estimator = sc::parse_estimator(f.estimator);
    c.mode = f.multi_y ? sc::OutcomeMode::multi_y : sc::OutcomeMode::single_y;
    c.aic_penalty = sc::parse_aic_penalty(f.aic_penalty);
    c.ci = f.ci;
    c.threshold = f.threshold;
    c.sample_y = f.sample_y;
    c.sample_z = f.sample_z;

    const bool tty = interactive();
    std::vector<std::string> missing;
    if (!f.draws) {
        if (tty) f.draws = ask_number<std::size_t>("Number of bootstrap draws", "1000");
        else missing.push_back("--draws");
    }
    if (!f.kfold) {
        if (tty) f.kfold = ask_number<std::size_t>("Number of folds", "10");
        else missing.push_back("--kfold");
    }
    if (!f.seed) {
        if (tty) f.seed = ask_number<std::uint64_t>("Random seed", "192735");
        else missing.push_back("--seed");
    }
    if (f.oos_metric.empty()) {
        if (tty) f.oos_metric = prompt("OOS metric (rmse, pseudo-r2, mcfaddens-r2, cross-entropy, imv)",
                                       c.estimator == sc::Estimator::logistic ? "cross-entropy" : "pseudo-r2");
        else missing.push_back("--oos-metric");
    }
    if (!f.n_cpu) {
        const auto hw = std::max(2u, std::thread::hardware_concurrency());
        if (tty) f.n_cpu = ask_number<std::size_t>("Number of CPUs", std::to_string(hw - 1));
        else f.n_cpu = 1;
    }
    if (!missing.empty()) {
        std::string msg = "missing required option(s):";
        for (const auto& m : missing) msg += " " + m;
        throw sc::ConfigError(msg + " (stdin is not a terminal, so no prompt)");
    }
    c.draws = *f.draws;
    c.kfold = *f.kfold;
    c.seed = *f.seed;
    c.oos_metric = sc::parse_oos_metric(f.oos_metric);
    c.n_cpu = *f.n_cpu;
    return c;
}

void add_chart_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--ext", f.ext, "Chart output: svg or pdf-data (CSV panel data only)");
    cmd->add_option("--highlight", f.highlight, "Extra control subsets to highlight, e.g. \"z1,z2;z3\"");
    cmd->add_option("--ic", f.ic, "Information criterion for panel h: aic, bic or hqic");
    cmd->add_flag("--loess", f.loess, "LOESS-smooth the specification curve");
    cmd->add_flag("--oddsratio", f.odds, "Show logistic estimates as odds ratios");
}

sc::ChartOptions chart_options(const RunFlags& f, double ci) {
    sc::ChartOptions o;
    o.highlight = parse_highlight(f.highlight);
    o.ci = ci;
    o.ic = f.ic;
    o.loess = f.loess;
    o.odds_ratio = f.odds;
    o.format = sc::parse_chart_format(f.ext);
    return o;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Specification curve analysis"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    RunFlags f;
    std::string config_path;

    auto* run = app.add_subcommand("run", "Fit every specification and write results");
    run->add_option("--config", config_path, "key=value file mirroring the flags; flags override it");
    run->add_option("--data", f.data, "CSV file")->required();
    run->add_option("--na", f.na, "Comma-separated missing-value markers");
    run->add_option("--group", f.group, "Group column for fixed effects");
    run->add_option("--y", f.y, "Dependent variable(s), comma-separated")->required();
    run->add_option("--x", f.x, "Fixed predictors; the first is the focal estimand")->required();
    run->add_option("--controls", f.controls, "Candidate controls, comma-separated");
    run->add_option("--estimator", f.estimator, "ols or logistic");
    run->add_flag("--multi-y", f.multi_y, "Enumerate composites of the dependent variables");
    run->add_option("--sample-y", f.sample_y, "Subsample this many outcome composites");
    run->add_option("--sample-z", f.sample_z, "Subsample this many control subsets");
    run->add_option("--kfold", f.kfold, "Cross-validation folds");
    run->add_option("--oos-metric", f.oos_metric, "rmse, pseudo-r2, mcfaddens-r2, cross-entropy or imv");
    run->add_option("--draws", f.draws, "Bootstrap draws");
    run->add_option("--seed", f.seed, "Master seed");
    run->add_option("--ci", f.ci, "Confidence level of the curve band; 1 gives min/max");
    run->add_option("--threshold", f.threshold, "Significance threshold for the count functionals");
    run->add_option("--aic-penalty", f.aic_penalty, "observations (2N) or parameters (2P)");
    run->add_option("--n-cpu", f.n_cpu, "Worker threads");
    run->add_option("--out", f.out, "Output directory");
    run->add_flag("--no-charts", f.no_charts, "Skip chart emission");
    run->add_flag("--quiet", f.quiet, "Do not print the summary");
    add_chart_flags(run, f);

    std::vector<std::size_t> grid_draws, grid_folds{2, 5, 10}, grid_controls{3, 4, 5};
    std::size_t repeats = 3, rows = 200, grid_points = 7;
    bool full_grid = false;
    std::string profile_out;
    auto* prof = app.add_subcommand("profile", "Time runs over a grid of draws, folds and controls");
    prof->add_option("--draws", grid_draws, "Draw counts (default: log-spaced 10..1000)")->delimiter(',');
    prof->add_option("--grid-points", grid_points, "Number of log-spaced draw values");
    prof->add_option("--folds", grid_folds, "Fold counts")->delimiter(',');
    prof->add_option("--controls", grid_controls, "Control pool sizes")->delimiter(',');
    prof->add_option("--repeats", repeats, "Trials per cell");
    prof->add_option("--rows", rows, "Synthetic sample size");
    prof->add_option("--estimator", f.estimator, "ols or logistic");
    prof->add_option("--seed", f.seed, "Seed for the synthetic data");
    prof->add_option("--n-cpu", f.n_cpu, "Worker threads");
    prof->add_flag("--full-grid", full_grid, "25 draw values in 10..10000, folds 2..25, controls 3..7, 10 repeats");
    prof->add_option("--out", profile_out, "Write the timing table to this CSV file");

    std::string results_path;
    auto* charts = app.add_subcommand("charts", "Re-render charts from a results file");
    charts->add_option("--results", results_path, "results.json")->required();
    charts->add_option("--out", f.out, "Output directory");
    charts->add_option("--ci", f.ci, "Confidence level of the curve band");
    add_chart_flags(charts, f);

    std::vector<std::string> inputs;
    auto* concat = app.add_subcommand("concat", "Stack several results files and recompute curve statistics");
    concat->add_option("--inputs", inputs, "results.json files")->required()->expected(1, -1);
    concat->add_option("--out", f.out, "Output directory");
    concat->add_flag("--quiet", f.quiet, "Do not print the summary");

    auto* summ = app.add_subcommand("summary", "Print the text summary of a results file");
    summ->add_option("--results", results_path, "results.json")->required();

    // A config file is spliced in ahead of the real flags so the flags win.
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            auto extra = config_file_args(args[i + 1]);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            const auto sub = std::find(args.begin(), args.end(), "run");
            args.insert(sub == args.end() ? args.begin() : sub + 1, extra.begin(), extra.end());
            break;
        }
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const std::string out = f.out.empty() ? default_out_dir() : f.out;
    if (run->parsed()) {
        auto cfg = to_config(f);
        const auto res = sc::run(cfg);
        sc::export_results(res, out);
        if (!f.no_charts) sc::emit_charts(res, chart_options(f, cfg.ci), out);
        for (const auto& w : res.diagnostics.warnings) std::cerr << "warning: " << w << "\n";
        if (!f.quiet) std::cout << sc::summary(res);
    } else if (prof->parsed()) {
        sc::ProfileGrid grid;
        grid.estimator = sc::parse_estimator(f.estimator);
        grid.seed = f.seed.value_or(0);
        grid.n_cpu = f.n_cpu.value_or(1);
        grid.n_rows = rows;
        if (full_grid) {
            grid.draws = sc::log_spaced(10, 10000, 25);
            grid.folds = {2, 5, 10, 15, 20, 25};
            grid.controls = {3, 4, 5, 6, 7};
            grid.repeats = 10;
        } else {
            grid.draws = grid_draws.empty() ? sc::log_spaced(10, 1000, grid_points) : grid_draws;
            grid.folds = grid_folds;
            grid.controls = grid_controls;
            grid.repeats = repeats;
        }
        const auto text = sc::format_profile(sc::profile(grid));
        if (!profile_out.empty()) {
            std::ofstream o(profile_out);
            if (!o) throw sc::DataError("cannot write " + profile_out);
            o << text;
        }
        std::cout << text;
    } else if (charts->parsed()) {
        const auto res = sc::load_results(results_path);
        for (const auto& name : sc::emit_charts(res, chart_options(f, f.ci), out)) std::cout << name << "\n";
    } else if (concat->parsed()) {
        std::vector<sc::CurveResults> runs;
        for (const auto& p : inputs) runs.push_back(sc::load_results(p));
        const auto res = sc::concat_results(runs);
        sc::export_results(res, out);
        if (!f.quiet) std::cout << sc::summary(res);
    } else if (summ->parsed()) {
        std::cout << sc::summary(sc::load_results(results_path));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const sc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const sc::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const sc::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
