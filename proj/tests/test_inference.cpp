#include "specurve/distributions.hpp"
#include "specurve/engine.hpp"
#include "specurve/errors.hpp"
#include "specurve/inference.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace specurve;

namespace {

struct Fixture {
    Dataset ds;
    SpecSpace space;
    std::vector<std::optional<PreparedSpec>> specs;
    std::vector<double> full;

    Fixture(double beta, std::size_t n, std::size_t controls, std::uint64_t seed) {
        SyntheticOptions so;
        so.n_rows = n;
        so.n_controls = controls;
        so.beta = beta;
        so.seed = seed;
        ds = synthetic_dataset(so);
        std::vector<std::string> z;
        for (std::size_t j = 0; j < controls; ++j) z.push_back("z" + std::to_string(j + 1));
        space = enumerate({"y"}, {"x1"}, z, OutcomeMode::single_y);
        for (const auto& s : space.specs) {
            specs.emplace_back(std::in_place, ds, ds.column("y"), space, s, false);
            full.push_back(specs.back()->fit().beta(1));
        }
    }
};

}  // namespace

TEST_CASE("identity resample reproduces the full-sample estimates") {
    Fixture f(1.0, 60, 2, 1);
    BootstrapHooks hooks;
    hooks.resampler = [](std::size_t, std::size_t n) {
        std::vector<std::size_t> r(n);
        std::iota(r.begin(), r.end(), 0);
        return r;
    };
    BootstrapOptions opt;
    opt.draws = 1;
    opt.hooks = &hooks;
    const auto boot = bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    for (std::size_t s = 0; s < f.specs.size(); ++s) {
        CHECK(boot.estimates(static_cast<Eigen::Index>(s), 0) == doctest::Approx(f.full[s]).epsilon(1e-12));
    }
}

TEST_CASE("every spec in a draw sees the same rows") {
    Fixture f(1.0, 40, 3, 2);
    std::vector<std::vector<std::vector<std::size_t>>> seen(5, std::vector<std::vector<std::size_t>>(f.specs.size()));
    BootstrapHooks hooks;
    hooks.observer = [&](std::size_t b, std::size_t s, std::span<const std::size_t> rows) {
        seen[b][s].assign(rows.begin(), rows.end());
    };
    BootstrapOptions opt;
    opt.draws = 5;
    opt.seed = 9;
    opt.hooks = &hooks;
    bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    for (std::size_t b = 0; b < 5; ++b) {
        CHECK(seen[b][0].size() == 40);
        for (std::size_t s = 1; s < f.specs.size(); ++s) CHECK(seen[b][s] == seen[b][0]);
    }
    CHECK(seen[0][0] != seen[1][0]);
}

TEST_CASE("bootstrap is deterministic and thread-count independent") {
    Fixture f(0.5, 50, 3, 3);
    BootstrapOptions opt;
    opt.draws = 64;
    opt.seed = 123;
    const auto a = bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    const auto b = bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    opt.n_threads = 4;
    const auto c = bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    CHECK(a.estimates == b.estimates);
    CHECK(a.estimates == c.estimates);
    CHECK(a.pvalues == c.pvalues);
    opt.seed = 124;
    CHECK_FALSE(bootstrap_estimands(f.specs, f.ds.n_rows(), opt).estimates == a.estimates);
    opt.draws = 0;
    CHECK_THROWS_AS(bootstrap_estimands(f.specs, f.ds.n_rows(), opt), ConfigError);
}

TEST_CASE("bootstrap median sits inside the analytic interval") {
    Fixture f(1.0, 120, 1, 4);
    BootstrapOptions opt;
    opt.draws = 400;
    opt.seed = 5;
    const auto boot = bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    const auto fit = f.specs[0]->fit();
    std::vector<double> row;
    for (Eigen::Index b = 0; b < boot.n_draws(); ++b) row.push_back(boot.estimates(0, b));
    const double med = empirical_quantile(row, 0.5);
    CHECK(std::abs(med - fit.beta(1)) < 1.96 * fit.se(1));
}

TEST_CASE("rejected specs and refits are missing") {
    Fixture f(1.0, 30, 1, 6);
    f.specs[0].reset();
    BootstrapOptions opt;
    opt.draws = 4;
    const auto boot = bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    for (Eigen::Index b = 0; b < 4; ++b) CHECK(std::isnan(boot.estimates(0, b)));
    CHECK(boot.rejected[0] == 4);
    CHECK(unstable_specs(boot) == std::vector<std::size_t>{0});
}

TEST_CASE("confidence bands") {
    BootstrapMatrix m;
    m.estimates.resize(3, 5);
    m.estimates.row(0).setConstant(2.0);
    m.estimates.row(1) << 5, 1, 4, 2, 3;
    m.estimates.row(2).setConstant(std::nan(""));
    m.pvalues = m.estimates;
    const auto full = confidence_band(m, 1.0);
    CHECK(full[0].low == 2.0);
    CHECK(full[0].high == 2.0);
    CHECK(full[1].low == 1.0);
    CHECK(full[1].high == 5.0);
    CHECK(full[1].median == 3.0);
    CHECK(std::isnan(full[2].low));
    // sort-based type-7 oracle at alpha = 0.5 -> q = 0.25, 0.75 on {1..5}: 2 and 4
    const auto half = confidence_band(m, 0.5);
    CHECK(half[1].low == doctest::Approx(2.0));
    CHECK(half[1].high == doctest::Approx(4.0));
    CHECK_THROWS_AS(confidence_band(m, 0.0), ConfigError);
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{std::nan("")}, 0.5), NumericError);

    std::mt19937_64 g(10);
    const Eigen::MatrixXd r = oracle::random_matrix(g, 20, 37);
    BootstrapMatrix rm;
    rm.estimates = r;
    rm.pvalues = r;
    for (double alpha : {0.5, 0.9, 0.95, 1.0}) {
        for (const auto& b : confidence_band(rm, alpha)) {
            CHECK(b.low <= b.median);
            CHECK(b.median <= b.high);
        }
    }
    std::vector<double> row(37);
    for (int j = 0; j < 37; ++j) row[static_cast<std::size_t>(j)] = r(3, j);
    std::sort(row.begin(), row.end());
    const double h = 36 * 0.025;
    const double want = row[0] + h * (row[1] - row[0]);
    CHECK(confidence_band(rm, 0.95)[3].low == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("curve functionals") {
    const auto st = curve_functionals(std::vector<double>{1, -1}, std::vector<double>{0.01, 0.5});
    CHECK(st.s[0] == 0.0);
    CHECK(st.s[3] == 1);
    CHECK(st.s[4] == 1);
    CHECK(st.s[5] == 1);
    CHECK(st.s[6] == 1);
    CHECK(st.s[7] == 0);

    std::mt19937_64 g(12);
    std::uniform_real_distribution<double> u(0, 1);
    std::normal_distribution<double> nd;
    std::vector<double> w(101), p(101);
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = nd(g);
        p[i] = u(g) * 0.2;
    }
    w[7] = std::nan("");
    const auto r = curve_functionals(w, p);
    double pos = 0, neg = 0, sig = 0, ps = 0, ns = 0, mn = 1e9, mx = -1e9;
    std::vector<double> kept;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::isnan(w[i])) continue;
        kept.push_back(w[i]);
        pos += w[i] > 0;
        neg += w[i] < 0;
        sig += p[i] < 0.05;
        ps += w[i] > 0 && p[i] < 0.05;
        ns += w[i] < 0 && p[i] < 0.05;
        mn = std::min(mn, w[i]);
        mx = std::max(mx, w[i]);
    }
    std::sort(kept.begin(), kept.end());
    CHECK(r.defined == 100);
    CHECK(r.s[0] == doctest::Approx(0.5 * (kept[49] + kept[50])));
    CHECK(r.s[1] == mn);
    CHECK(r.s[2] == mx);
    CHECK(r.s[3] == pos);
    CHECK(r.s[4] == neg);
    CHECK(r.s[5] == sig);
    CHECK(r.s[6] == ps);
    CHECK(r.s[7] == ns);
    CHECK(curve_functionals(w, p, 0.1).s[5] >= sig);
}

TEST_CASE("null p-values") {
    CurveStats obs;
    obs.defined = 10;
    obs.s = {5, 0, 9, 10, 0, 10, 10, 0};
    std::vector<CurveStats> nulls(4);
    for (auto& n : nulls) {
        n.defined = 10;
        n.s = {0, -1, 1, 5, 5, 1, 1, 0};
    }
    const auto p = null_pvalues(obs, nulls);
    CHECK(p[0] == 0.0);
    CHECK(p[3] == 0.0);
    CHECK(p[4] == 1.0);
    CHECK(p[7] == 0.0);  // ties do not count
    for (double v : p) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("Stouffer") {
    const auto half = stouffer(std::vector<double>(9, 0.5));
    CHECK(half.z == doctest::Approx(0.0).scale(1.0));
    CHECK(half.p == doctest::Approx(0.5));
    const auto four = stouffer(std::vector<double>{0.01, 0.2, 0.5, 0.9});
    CHECK(std::abs(four.z - 0.9432087710345774195496045) < 1e-9);
    CHECK(std::abs(four.p - 0.1727870639608724454308467) < 1e-9);
    const auto extreme = stouffer(std::vector<double>{0.0, 1.0});
    CHECK(std::isfinite(extreme.z));
    CHECK(std::abs(extreme.z) < 1e-3);  // 1 - 1e-15 is not exact in binary
    CHECK(stouffer(std::vector<double>{0.0}).z == doctest::Approx(normal_quantile(1.0 - 1e-15)));
}

TEST_CASE("null bootstrap with a zero shift is the plain bootstrap") {
    Fixture f(1.0, 50, 2, 7);
    BootstrapOptions opt;
    opt.draws = 20;
    opt.seed = 3;
    const auto plain = bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    const std::vector<double> zero(f.specs.size(), 0.0);
    const auto shifted = bootstrap_estimands(f.specs, f.ds.n_rows(), opt, zero);
    CHECK(plain.estimates == shifted.estimates);
}

TEST_CASE("planted effect: null draws centre on zero") {
    Fixture f(2.0, 100, 2, 8);
    BootstrapOptions opt;
    opt.draws = 500;
    opt.seed = 11;
    const auto nb = null_bootstrap(f.specs, f.ds.n_rows(), f.full, opt);
    for (std::size_t s = 0; s < f.specs.size(); ++s) {
        const auto se = f.specs[s]->fit().se(1);
        const double mean = nb.estimates.row(static_cast<Eigen::Index>(s)).mean();
        CHECK(std::abs(mean) < 3 * se);
    }
}

TEST_CASE("under a true null the null draws match the outcome draws") {
    Fixture f(0.0, 100, 1, 9);
    BootstrapOptions opt;
    opt.draws = 1000;
    opt.seed = 13;
    const auto boot = bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    const auto nb = null_bootstrap(f.specs, f.ds.n_rows(), f.full, opt);
    // Centre the outcome draws on the full-sample estimate; the null draws are
    // centred on zero by construction.
    for (std::size_t s = 0; s < f.specs.size(); ++s) {
        std::vector<double> a, b;
        for (Eigen::Index d = 0; d < 1000; ++d) {
            a.push_back(boot.estimates(static_cast<Eigen::Index>(s), d) - f.full[s]);
            b.push_back(nb.estimates(static_cast<Eigen::Index>(s), d));
        }
        const double stat = oracle::ks_two_sample_stat(a, b);
        CHECK(oracle::ks_pvalue(stat, 500.0) > 0.01);
    }
}

TEST_CASE("curve inference assembly") {
    Fixture f(1.0, 80, 2, 14);
    BootstrapOptions opt;
    opt.draws = 50;
    opt.seed = 1;
    const auto boot = bootstrap_estimands(f.specs, f.ds.n_rows(), opt);
    const auto nb = null_bootstrap(f.specs, f.ds.n_rows(), f.full, opt);
    std::vector<double> p;
    for (const auto& s : f.specs) p.push_back(s->fit().pvalues(1));
    const auto ci = curve_inference(f.full, p, boot, nb, 0.05, false);
    CHECK(ci.null_draws.size() == 50);
    CHECK(ci.pooled_bootstrap.defined == f.specs.size() * 50);
    CHECK(ci.null_pvals[0] == 0.0);
    CHECK(ci.stouffer.p == doctest::Approx(normal_cdf(-ci.stouffer.z)));
}
