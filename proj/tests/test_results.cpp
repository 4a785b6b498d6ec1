#include "specurve/charts.hpp"
#include "specurve/engine.hpp"
#include "specurve/errors.hpp"
#include "specurve/results.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace specurve;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(std::size_t controls) {
    RunConfig c;
    c.y_cols = {"y"};
    c.x_cols = {"x1"};
    for (std::size_t j = 0; j < controls; ++j) c.z_cols.push_back("z" + std::to_string(j + 1));
    c.draws = 20;
    c.kfold = 5;
    c.seed = 17;
    return c;
}

CurveResults small_run(std::size_t controls = 3, std::uint64_t data_seed = 1) {
    SyntheticOptions so;
    so.n_rows = 80;
    so.n_controls = controls;
    so.seed = data_seed;
    return run(small_config(controls), synthetic_dataset(so));
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("specurve_test_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("round4 mimics round-then-repr") {
    CHECK(round4(0.0) == "0.0");
    CHECK(round4(0.75) == "0.75");
    CHECK(round4(0.69764) == "0.6976");
    CHECK(round4(-0.23041) == "-0.2304");
    CHECK(round4(28.20521) == "28.2052");
    CHECK(round4(1.0) == "1.0");
    CHECK(round4(12.0) == "12.0");
}

TEST_CASE("summary layout") {
    const auto res = small_run();
    const auto ls = lines(summary(res));
    REQUIRE(ls.size() > 30);
    CHECK(ls[0] == std::string(30, '='));
    CHECK(ls[1] == "1. Model Summary");
    CHECK(ls[3] == "Model: OLS Robust");
    CHECK(ls[5] == "Dependent variable: y");
    CHECK(ls[6] == "Independent variable: x1");
    CHECK(ls[7] == "Number of possible controls: 3");
    CHECK(ls[8] == "Number of draws: 20");
    CHECK(ls[9] == "Number of folds: 5");
    CHECK(ls[10] == "Number of specifications: 8");
    CHECK(std::count_if(ls.begin(), ls.end(), [](const std::string& l) { return l.rfind("Min AIC: ", 0) == 0; }) == 1);
    const auto mx = std::find_if(ls.begin(), ls.end(), [](const std::string& l) { return l.rfind("Max Average", 0) == 0; });
    REQUIRE(mx != ls.end());
    CHECK(mx->back() == ' ');
    CHECK(ls.back().rfind("Median Average: ", 0) == 0);
    const auto ml = std::find_if(ls.begin(), ls.end(),
                                 [](const std::string& l) { return l.rfind("Min Log Likelihood", 0) == 0; });
    REQUIRE(ml != ls.end());
    CHECK(ml->ends_with("Specs: []"));
}

TEST_CASE("JSON round trip reproduces the summary") {
    const auto res = small_run();
    const auto text = to_json(res);
    const auto back = from_json(text);
    CHECK(summary(back) == summary(res));
    CHECK(to_json(back) == text);
    CHECK(back.boot.estimates == res.boot.estimates);

    const auto dir = scratch("export");
    export_results(res, dir);
    CHECK(fs::exists(dir / "results.json"));
    CHECK(fs::exists(dir / "specs.csv"));
    CHECK(fs::exists(dir / "draws.csv"));
    CHECK(summary(load_results(dir / "results.json")) == summary(res));
    std::ifstream specs(dir / "specs.csv");
    std::size_t rows = 0;
    for (std::string l; std::getline(specs, l);) ++rows;
    CHECK(rows == 9);
    CHECK_THROWS_AS(from_json("{\"version\": 99}"), DataError);
    CHECK_THROWS_AS(from_json("not json"), DataError);
}

TEST_CASE("odds-ratio view") {
    const std::vector<double> w{0.0, std::log(2.0)};
    const std::vector<Band> b{{-1, 0, 1}, {0, 0.5, 1}};
    const auto v = odds_ratio_view(w, b);
    CHECK(v.estimates[0] == 1.0);
    CHECK(v.estimates[1] == doctest::Approx(2.0));
    CHECK(v.bands[0].low == doctest::Approx(std::exp(-1.0)));
    CHECK(v.bands[1].high == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("LOESS") {
    std::vector<double> x, lin, flat;
    for (int i = 0; i < 40; ++i) {
        x.push_back(i * 0.25);
        lin.push_back(3.0 - 0.5 * i * 0.25);
        flat.push_back(7.0);
    }
    const auto a = loess_smooth(x, lin, 0.3);
    const auto b = loess_smooth(x, flat, 0.5);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(a[i] - lin[i]) < 1e-10);
        CHECK(std::abs(b[i] - 7.0) < 1e-12);
    }

    // Weighted least-squares oracle at one point, written out directly.
    std::vector<double> y;
    for (std::size_t i = 0; i < x.size(); ++i) y.push_back(std::sin(x[i]) + 0.1 * std::cos(7 * x[i]));
    const auto s = loess_smooth(x, y, 0.3);
    const std::size_t q = 12;  // ceil(0.3 * 40)
    for (std::size_t at : {0u, 17u, 39u}) {
        std::vector<double> d;
        for (double xi : x) d.push_back(std::abs(xi - x[at]));
        auto sorted = d;
        std::sort(sorted.begin(), sorted.end());
        const double h = sorted[q - 1];
        double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double u = d[i] / h;
            if (u >= 1.0) continue;
            const double w = std::pow(1 - u * u * u, 3);
            sw += w;
            sx += w * x[i];
            sy += w * y[i];
            sxx += w * x[i] * x[i];
            sxy += w * x[i] * y[i];
        }
        const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
        const double icpt = (sy - slope * sx) / sw;
        CHECK(s[at] == doctest::Approx(icpt + slope * x[at]).epsilon(1e-9));
    }
    CHECK_THROWS_AS(loess_smooth(x, y, 0.0), ConfigError);
    CHECK_THROWS_AS(loess_smooth(x, y, 1.5), ConfigError);
    CHECK_THROWS_AS(loess_smooth(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ConfigError);
}

TEST_CASE("charts") {
    const auto res = small_run();
    const auto dir = scratch("charts");
    ChartOptions opt;
    opt.loess = true;
    opt.highlight = {{"z1", "z3"}};
    const auto files = emit_charts(res, opt, dir);
    CHECK(files.size() == 16);
    for (char p = 'a'; p <= 'h'; ++p) {
        CHECK(fs::exists(dir / (std::string("panel_") + p + ".svg")));
        CHECK(fs::exists(dir / (std::string("panel_") + p + ".csv")));
    }
    opt.format = ChartFormat::pdf_data;
    const auto dir2 = scratch("charts_pdf");
    const auto files2 = emit_charts(res, opt, dir2);
    CHECK(files2.size() == 8);
    CHECK(std::all_of(files2.begin(), files2.end(), [](const std::string& f) { return f.ends_with(".csv"); }));
    CHECK(parse_chart_format("pdf-data") == ChartFormat::pdf_data);
    CHECK_THROWS_AS(parse_chart_format("png"), ConfigError);

    opt.odds_ratio = true;
    CHECK_THROWS_AS(emit_charts(res, opt, dir2), ConfigError);
}

TEST_CASE("highlights always include the full and empty models") {
    const auto res = small_run();
    const auto h = resolve_highlights(res, {{"z2"}});
    REQUIRE(h.size() == 3);
    CHECK(res.space.specs[h[0]].z_subset.size() == 3);
    CHECK(res.space.specs[h[1]].z_subset.empty());
    CHECK(res.space.specs[h[2]].z_subset == std::vector<std::string>{"z2"});
    try {
        resolve_highlights(res, {{"nope"}});
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("z1") != std::string::npos);
    }
}

TEST_CASE("curve order sorts by median draw with missing specs last") {
    BootstrapMatrix m;
    m.estimates.resize(4, 3);
    m.estimates << 3, 3, 3, std::nan(""), std::nan(""), std::nan(""), 1, 2, 0, 1, 1, 1;
    CHECK(curve_order(m) == std::vector<std::size_t>{2, 3, 0, 1});
}

TEST_CASE("concatenation") {
    const auto a = small_run(3, 1);
    const auto one = concat_results({a});
    CHECK(summary(one) == summary(a));

    const auto b = small_run(3, 2);
    const auto ab = concat_results({a, b});
    CHECK(ab.space.size() == 16);
    CHECK(ab.boot.n_specs() == 16);
    for (std::size_t i = 0; i < ab.space.size(); ++i) CHECK(ab.space.specs[i].index == i);
    std::vector<double> p = a.pvalues();
    const auto pb = b.pvalues();
    p.insert(p.end(), pb.begin(), pb.end());
    CHECK(ab.inference.stouffer.z == doctest::Approx(stouffer(p).z).epsilon(1e-12));

    auto other = small_run(3, 3);
    other.config.draws = 21;
    CHECK_THROWS_AS(concat_results({a, other}), ConfigError);
}

TEST_CASE("multi-outcome charts omit likelihood panels") {
    SyntheticOptions so;
    so.n_rows = 60;
    so.n_controls = 2;
    auto ds = synthetic_dataset(so);
    auto cols = ds.columns();
    Column y2 = cols[0];
    y2.name = "y2";
    for (auto& v : y2.values) v = 2 * v + 1;
    cols.push_back(y2);
    const Dataset multi(cols);
    RunConfig c = small_config(2);
    c.y_cols = {"y", "y2"};
    c.mode = OutcomeMode::multi_y;
    const auto res = run(c, multi);
    CHECK(res.space.size() == 12);
    const auto dir = scratch("charts_multi");
    const auto files = emit_charts(res, ChartOptions{}, dir);
    for (const auto& f : files) {
        CHECK_FALSE(f.starts_with("panel_b"));
        CHECK_FALSE(f.starts_with("panel_c"));
        CHECK_FALSE(f.starts_with("panel_h"));
    }
    CHECK(files.size() == 10);
}
