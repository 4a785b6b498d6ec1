#include "specurve/dataset.hpp"
#include "specurve/distributions.hpp"
#include "specurve/errors.hpp"
#include "specurve/estimators.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace specurve;

namespace {

DesignMatrix design(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool intercept) {
    DesignMatrix dm;
    dm.X = X;
    dm.y = y;
    dm.has_intercept = intercept;
    for (Eigen::Index j = 0; j < X.cols(); ++j) dm.column_names.push_back("c" + std::to_string(j));
    for (Eigen::Index i = 0; i < X.rows(); ++i) dm.rows.push_back(static_cast<std::size_t>(i));
    return dm;
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& Z) {
    Eigen::MatrixXd X(Z.rows(), Z.cols() + 1);
    X.col(0).setOnes();
    X.rightCols(Z.cols()) = Z;
    return X;
}

}  // namespace

TEST_CASE("OLS matches the normal-equations oracle on random instances") {
    std::mt19937_64 g(20240611);
    std::uniform_int_distribution<int> pn(1, 5);
    for (int rep = 0; rep < 50; ++rep) {
        const int p = pn(g);
        const int n = std::uniform_int_distribution<int>(p + 3, 40)(g);
        const Eigen::MatrixXd X = with_intercept(oracle::random_matrix(g, n, p));
        const Eigen::VectorXd y = oracle::random_matrix(g, n, 1).col(0) + X.col(1);
        const auto fit = ols_fit(design(X, y, true));
        const auto ref = oracle::normal_equations(X, y);
        CHECK((fit.beta - ref).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("OLS standard errors, p-values and log-likelihood") {
    std::mt19937_64 g(5);
    const Eigen::MatrixXd X = with_intercept(oracle::random_matrix(g, 30, 2));
    const Eigen::VectorXd y = 2.0 * X.col(1) + oracle::random_matrix(g, 30, 1).col(0);
    const auto fit = ols_fit(design(X, y, true));
    const Eigen::VectorXd e = y - X * fit.beta;
    const double rss = e.squaredNorm();
    const double s2 = rss / (30 - 3);
    const Eigen::MatrixXd cov = s2 * (X.transpose() * X).inverse();
    for (int j = 0; j < 3; ++j) {
        CHECK(fit.se(j) == doctest::Approx(std::sqrt(cov(j, j))).epsilon(1e-9));
        CHECK(fit.pvalues(j) == doctest::Approx(student_t_two_sided(fit.beta(j) / fit.se(j), 27)).epsilon(1e-9));
    }
    CHECK(fit.rss == doctest::Approx(rss).epsilon(1e-12));
    const double ll = -15.0 * (1.0 + std::log(2.0 * std::numbers::pi) + std::log(rss / 30.0));
    CHECK(fit.loglik == doctest::Approx(ll).epsilon(1e-12));
    CHECK(unit_variance_loglik(rss, 30) == doctest::Approx(-15.0 * std::log(2 * std::numbers::pi) - rss / 2));
}

TEST_CASE("ols_core agrees with ols_fit") {
    std::mt19937_64 g(11);
    const Eigen::MatrixXd X = with_intercept(oracle::random_matrix(g, 25, 3));
    const Eigen::VectorXd y = oracle::random_matrix(g, 25, 1).col(0);
    const auto full = ols_fit(design(X, y, true));
    const auto core = ols_core(X, y, 1);
    REQUIRE(core);
    CHECK((core->beta - full.beta).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(core->focal_se == doctest::Approx(full.se(1)).epsilon(1e-10));
    CHECK(core->focal_p == doctest::Approx(full.pvalues(1)).epsilon(1e-10));
    Eigen::MatrixXd bad = X;
    bad.col(3) = bad.col(2);
    CHECK_FALSE(ols_core(bad, y, 1));
}

TEST_CASE("OLS rejections") {
    std::mt19937_64 g(1);
    Eigen::MatrixXd X = with_intercept(oracle::random_matrix(g, 10, 2));
    X.col(2) = 3.0 * X.col(1);
    const Eigen::VectorXd y = Eigen::VectorXd::Ones(10);
    try {
        ols_fit(design(X, y, true));
        FAIL("expected collinear");
    } catch (const SpecRejected& e) {
        CHECK(e.reason() == RejectReason::collinear);
    }
    const Eigen::MatrixXd small = with_intercept(oracle::random_matrix(g, 3, 2));
    CHECK_THROWS_AS(ols_fit(design(small, Eigen::VectorXd::Ones(3), true)), SpecRejected);
}

TEST_CASE("logistic regression matches an independent IRLS oracle") {
    std::mt19937_64 g(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const int p = std::uniform_int_distribution<int>(1, 4)(g);
        const int n = std::uniform_int_distribution<int>(25, 40)(g);
        const Eigen::MatrixXd X = with_intercept(oracle::random_matrix(g, n, p));
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            const double eta = 0.3 + 0.8 * X(i, 1);
            y(i) = u(g) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
        }
        FitResult fit;
        try {
            fit = logit_fit(design(X, y, true));
        } catch (const SpecRejected&) {
            continue;  // separated sample; the oracle diverges there too
        }
        const auto ref = oracle::irls(X, y);
        CHECK((fit.beta - ref).cwiseAbs().maxCoeff() < 1e-6);
        ++checked;
    }
    CHECK(checked >= 40);
}

TEST_CASE("logistic standard errors and offset") {
    std::mt19937_64 g(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Eigen::MatrixXd X = with_intercept(oracle::random_matrix(g, 200, 2));
    Eigen::VectorXd y(200);
    for (int i = 0; i < 200; ++i) y(i) = u(g) < 1.0 / (1.0 + std::exp(-(X(i, 1) - 0.5 * X(i, 2)))) ? 1.0 : 0.0;
    const auto fit = logit_fit(design(X, y, true));
    const Eigen::VectorXd mu = logistic(X * fit.beta);
    const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
    const Eigen::MatrixXd cov = (X.transpose() * w.asDiagonal() * X).inverse();
    for (int j = 0; j < 3; ++j) {
        CHECK(fit.se(j) == doctest::Approx(std::sqrt(cov(j, j))).epsilon(1e-6));
        CHECK(fit.pvalues(j) == doctest::Approx(normal_two_sided(fit.beta(j) / fit.se(j))).epsilon(1e-9));
    }
    CHECK(fit.loglik == doctest::Approx(bernoulli_loglik(y, mu)).epsilon(1e-9));

    // An offset equal to the fitted contribution of column 1 drives that coefficient to 0.
    const Eigen::VectorXd off = fit.beta(1) * X.col(1);
    LogitOptions opt;
    opt.offset = &off;
    const auto shifted = logit_fit(design(X, y, true), opt);
    CHECK(std::abs(shifted.beta(1)) < 1e-6);
}

TEST_CASE("logistic input checks and separation") {
    const Eigen::MatrixXd X = with_intercept(Eigen::MatrixXd(Eigen::VectorXd::LinSpaced(10, -1, 1)));
    Eigen::VectorXd y(10);
    y << 0, 0, 0, 0, 0, 1, 1, 1, 1, 1;
    try {
        logit_fit(design(X, y, true));
        FAIL("expected nonconvergence");
    } catch (const SpecRejected& e) {
        CHECK(e.reason() == RejectReason::nonconvergence);
    }
    Eigen::VectorXd bad = y;
    bad(0) = 0.5;
    CHECK_THROWS_AS(logit_fit(design(X, bad, true)), ConfigError);
}

TEST_CASE("L2 penalty shrinks slopes but not the intercept") {
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Eigen::MatrixXd X = with_intercept(oracle::random_matrix(g, 80, 2));
    Eigen::VectorXd y(80);
    for (int i = 0; i < 80; ++i) y(i) = u(g) < 1.0 / (1.0 + std::exp(-(1.0 + 2.0 * X(i, 1)))) ? 1.0 : 0.0;
    const auto plain = logit_fit(design(X, y, true));
    LogitOptions opt;
    opt.l2_inverse_strength = 0.1;
    const auto pen = logit_fit(design(X, y, true), opt);
    CHECK(std::abs(pen.beta(1)) < std::abs(plain.beta(1)));
    // First-order condition: X'(y - mu) = beta / C on slopes, 0 on the intercept.
    const Eigen::VectorXd grad = X.transpose() * (y - logistic(X * pen.beta));
    CHECK(std::abs(grad(0)) < 1e-6);
    CHECK(grad(1) == doctest::Approx(pen.beta(1) / 0.1).epsilon(1e-6));
    CHECK(grad(2) == doctest::Approx(pen.beta(2) / 0.1).epsilon(1e-6));
}

TEST_CASE("normal quantile against a high-precision table") {
    const std::pair<double, double> table[] = {
        {0.975, 1.959963984540054235524594},   {0.5, 0.0},
        {0.01, -2.326347874040841100885606},   {1e-10, -6.361340902404056204695376},
        {0.999999, 4.753424308822898948193988}, {0.3, -0.5244005127080407840382893},
        {1e-15, -7.941345326170996780966744},
    };
    for (const auto& [p, z] : table) CHECK(std::abs(normal_quantile(p) - z) < 1e-9);
    CHECK(std::isinf(normal_quantile(0.0)));
    CHECK(std::isinf(normal_quantile(1.0)));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
}
