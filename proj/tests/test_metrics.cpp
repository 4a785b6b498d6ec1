#include "specurve/errors.hpp"
#include "specurve/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace specurve;

TEST_CASE("adjusted R2 by hand") {
    const std::vector<double> y{1, 2, 3, 4, 6};
    const std::vector<double> yhat{1.1, 1.9, 3.2, 4.1, 5.7};
    double mean = 3.2, tss = 0, rss = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        tss += (y[i] - mean) * (y[i] - mean);
        rss += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    }
    const double want = 1.0 - (rss / (5 - 1 - 1)) / (tss / 4);
    CHECK(adjusted_r2(y, yhat, 1) == doctest::Approx(want).epsilon(1e-14));
    CHECK(adjusted_r2(y, y, 2) == doctest::Approx(1.0));
    CHECK(std::isnan(adjusted_r2(std::vector<double>{2, 2, 2}, std::vector<double>{2, 2, 2}, 0)));
    CHECK(std::isnan(adjusted_r2(y, yhat, 4)));
}

TEST_CASE("McFadden R2") {
    Eigen::VectorXd y(4), p(4);
    y << 1, 0, 1, 1;
    p.setConstant(0.75);
    CHECK(mcfadden_r2(y, p) == doctest::Approx(0.0).scale(1.0));
    p << 0.9, 0.2, 0.8, 0.7;
    const double ll = std::log(0.9) + std::log(0.8) + std::log(0.8) + std::log(0.7);
    const double ll0 = 3 * std::log(0.75) + std::log(0.25);
    CHECK(mcfadden_r2(y, p) == doctest::Approx(1.0 - ll / ll0).epsilon(1e-12));
}

TEST_CASE("information criteria identities") {
    const double ll = -123.4;
    for (std::size_t n : {10u, 47u, 1000u}) {
        for (std::size_t p : {1u, 3u, 8u}) {
            const auto a = information_criteria(ll, n, p, AicPenalty::parameters);
            const auto b = information_criteria(ll, n, p, AicPenalty::observations);
            const double dn = static_cast<double>(n), dp = static_cast<double>(p);
            CHECK(std::abs(a.aic - (2 * dp - 2 * ll)) < 1e-10);
            CHECK(std::abs(b.aic - (2 * dn - 2 * ll)) < 1e-10);
            CHECK(std::abs(a.bic - (dp * std::log(dn) - 2 * ll)) < 1e-10);
            CHECK(std::abs(a.hqic - (2 * dp * std::log(std::log(dn)) - 2 * ll)) < 1e-10);
            CHECK(std::abs((a.bic - a.aic) - dp * (std::log(dn) - 2)) < 1e-10);
            CHECK(a.bic == b.bic);
            CHECK(a.hqic == b.hqic);
        }
    }
    CHECK(std::isnan(information_criteria(ll, 2, 1).hqic));
    CHECK(aic_penalty_count(AicPenalty::observations, 47, 3) == 47.0);
    CHECK(aic_penalty_count(AicPenalty::parameters, 47, 3) == 3.0);
    CHECK(parse_aic_penalty("parameters") == AicPenalty::parameters);
    CHECK_THROWS_AS(parse_aic_penalty("x"), ConfigError);
}

TEST_CASE("arg max / min skip NaN and break ties low") {
    const std::vector<double> v{1.0, std::nan(""), 3.0, 3.0, -2.0};
    CHECK(arg_max(v)->index == 2);
    CHECK(arg_min(v)->index == 4);
    CHECK_FALSE(arg_max(std::vector<double>{std::nan("")}));
}

TEST_CASE("select_extremes") {
    std::vector<std::optional<InSampleMetrics>> ms(3);
    InSampleMetrics a;
    a.adj_r2 = 0.2;
    a.loglik = -10;
    a.aic = 30;
    a.bic = 31;
    a.hqic = 30.5;
    InSampleMetrics b = a;
    b.adj_r2 = 0.5;
    b.loglik = -8;
    b.aic = 32;
    b.bic = 29;
    b.hqic = 30.5;
    ms[0] = a;
    ms[2] = b;
    const auto r = select_extremes(ms);
    CHECK(r.max_fit->index == 2);
    CHECK(r.min_fit->index == 0);
    CHECK(r.max_loglik->index == 2);
    CHECK(r.min_loglik->index == 0);
    CHECK(r.min_aic->index == 0);
    CHECK(r.min_bic->index == 2);
    CHECK(r.min_hqic->index == 0);
    CHECK(r.max_fit->value == 0.5);
}
