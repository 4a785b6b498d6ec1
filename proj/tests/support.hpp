#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library beyond Eigen storage types.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace oracle {

inline std::string data_path(const std::string& name) {
    return std::string(SPECURVE_DATA_DIR) + "/" + name;
}

// OLS via the normal equations accumulated and solved in long double.
inline Eigen::VectorXd normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const auto p = X.cols();
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> A(p, p + 1);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            long double s = 0;
            for (Eigen::Index r = 0; r < X.rows(); ++r) s += static_cast<long double>(X(r, i)) * X(r, j);
            A(i, j) = s;
        }
        long double s = 0;
        for (Eigen::Index r = 0; r < X.rows(); ++r) s += static_cast<long double>(X(r, i)) * y(r);
        A(i, p) = s;
    }
    // Gauss-Jordan with partial pivoting.
    for (Eigen::Index c = 0; c < p; ++c) {
        Eigen::Index piv = c;
        for (Eigen::Index r = c + 1; r < p; ++r) {
            if (std::fabs(A(r, c)) > std::fabs(A(piv, c))) piv = r;
        }
        A.row(c).swap(A.row(piv));
        for (Eigen::Index r = 0; r < p; ++r) {
            if (r == c) continue;
            const long double f = A(r, c) / A(c, c);
            A.row(r) -= f * A.row(c);
        }
    }
    Eigen::VectorXd b(p);
    for (Eigen::Index i = 0; i < p; ++i) b(i) = static_cast<double>(A(i, p) / A(i, i));
    return b;
}

// Plain IRLS for the logistic model, fixed iteration budget, no step control.
inline Eigen::VectorXd irls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int iters = 60) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(X.cols());
    for (int it = 0; it < iters; ++it) {
        const Eigen::VectorXd eta = X * b;
        Eigen::VectorXd mu(eta.size()), w(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            mu(i) = 1.0 / (1.0 + std::exp(-eta(i)));
            w(i) = mu(i) * (1.0 - mu(i));
        }
        const Eigen::VectorXd z = eta + (y - mu).cwiseQuotient(w);
        const Eigen::MatrixXd XtW = X.transpose() * w.asDiagonal();
        b = (XtW * X).llt().solve(XtW * z);
    }
    return b;
}

// One-sample KS statistic against U(0,1).
inline double ks_uniform_stat(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        d = std::max(d, std::max((i + 1) / n - v[i], v[i] - i / n));
    }
    return d;
}

// Two-sample KS statistic.
inline double ks_two_sample_stat(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
inline double ks_pvalue(double d, double n_eff) {
    const double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        s += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    }
    return std::clamp(s, 0.0, 1.0);
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& g, Eigen::Index n, Eigen::Index p) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) m(i, j) = nd(g);
    }
    return m;
}

}  // namespace oracle
