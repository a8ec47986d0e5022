#pragma once

// OLS and ridge-stabilised logistic regression. Regressor matrices are passed
// without the intercept column; it is prepended here and reported first.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cogbench/core/error.hpp"
#include "cogbench/numopt/math.hpp"

namespace cogbench::numopt {

struct RegressionResult {
    /// Intercept first, then one entry per regressor column.
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    std::vector<std::string> names;
    int n_obs = 0;
    bool converged = false;
    /// Logistic only: the data are perfectly separable.
    bool separated = false;
    int iterations = 0;
    /// Logistic only: penalised log-likelihood after each accepted step.
    std::vector<double> ll_trace;

    double coef(std::size_t i) const { return coefficients.at(i); }
    double se(std::size_t i) const { return standard_errors.at(i); }
    double z(std::size_t i) const { return coefficients.at(i) / standard_errors.at(i); }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        throw Error("no coefficient named '" + name + "'");
    }
    double coef(const std::string& name) const { return coef(index_of(name)); }
    double z(const std::string& name) const { return z(index_of(name)); }
};

inline Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X) {
    Eigen::MatrixXd A(X.rows(), X.cols() + 1);
    A.col(0).setOnes();
    A.rightCols(X.cols()) = X;
    return A;
}

inline std::vector<std::string> coefficient_names(const std::vector<std::string>& names, Eigen::Index cols) {
    std::vector<std::string> out{"intercept"};
    for (Eigen::Index j = 0; j < cols; ++j)
        out.push_back(static_cast<std::size_t>(j) < names.size() ? names[static_cast<std::size_t>(j)]
                                                                  : "x" + std::to_string(j + 1));
    return out;
}

/// Throws SingularDesignError for the first column that is constant or lies in the
/// span of the columns before it. Column indices count the intercept as 0.
inline void screen_design(const Eigen::MatrixXd& A, const std::vector<std::string>& names) {
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 1; j < A.cols(); ++j) {
        const auto col = A.col(j);
        if ((col.array() - col.mean()).abs().maxCoeff() <= 1e-12 * scale)
            throw SingularDesignError(static_cast<std::size_t>(j), names[static_cast<std::size_t>(j)]);
    }
    for (Eigen::Index j = 1; j < A.cols(); ++j) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.leftCols(j + 1));
        qr.setThreshold(1e-10);
        if (qr.rank() < j + 1) throw SingularDesignError(static_cast<std::size_t>(j), names[static_cast<std::size_t>(j)]);
    }
}

inline RegressionResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const std::vector<std::string>& names = {}) {
    if (X.rows() != y.size()) throw Error("ols: X and y row counts differ");
    const Eigen::MatrixXd A = with_intercept(X);
    const Eigen::Index n = A.rows();
    const Eigen::Index p = A.cols();
    if (n <= p)
        throw InsufficientDesignError("ols needs more observations than coefficients (" + std::to_string(n) + " <= " +
                                      std::to_string(p) + ")");
    RegressionResult r;
    r.names = coefficient_names(names, X.cols());
    screen_design(A, r.names);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    const Eigen::VectorXd beta = qr.solve(y);
    const double rss = (y - A * beta).squaredNorm();
    const double sigma2 = rss / static_cast<double>(n - p);
    const Eigen::MatrixXd cov = sigma2 * (A.transpose() * A).inverse();

    r.n_obs = static_cast<int>(n);
    r.converged = true;
    for (Eigen::Index i = 0; i < p; ++i) {
        r.coefficients.push_back(beta(i));
        r.standard_errors.push_back(std::sqrt(std::max(0.0, cov(i, i))));
    }
    return r;
}

struct LogisticOptions {
    /// L2 penalty on every coefficient except the intercept.
    double ridge = 1e-4;
    int max_iter = 100;
    double tol = 1e-10;
};

/// Penalised Bernoulli log-likelihood; A includes the intercept column.
inline double logistic_log_likelihood(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                                      double ridge = 0.0) {
    const Eigen::VectorXd eta = A * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * log_sigmoid(eta(i)) + (1.0 - y(i)) * log_sigmoid(-eta(i));
    return ll - 0.5 * ridge * beta.tail(beta.size() - 1).squaredNorm();
}

inline Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                                         double ridge = 0.0) {
    Eigen::VectorXd mu(A.rows());
    const Eigen::VectorXd eta = A * beta;
    for (Eigen::Index i = 0; i < eta.size(); ++i) mu(i) = sigmoid(eta(i));
    Eigen::VectorXd g = A.transpose() * (y - mu);
    g.tail(g.size() - 1) -= ridge * beta.tail(beta.size() - 1);
    return g;
}

inline RegressionResult logistic_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                     const std::vector<std::string>& names = {}, const LogisticOptions& opt = {}) {
    if (X.rows() != y.size()) throw Error("logistic_fit: X and y row counts differ");
    const double ones = y.sum();
    if (y.size() == 0 || ones <= 0.0 || ones >= static_cast<double>(y.size()))
        throw DegenerateDataError("logistic regression needs both outcome classes");

    const Eigen::MatrixXd A = with_intercept(X);
    const Eigen::Index p = A.cols();
    if (A.rows() <= p)
        throw InsufficientDesignError("logistic regression needs more observations than coefficients");
    RegressionResult r;
    r.names = coefficient_names(names, X.cols());
    screen_design(A, r.names);
    r.n_obs = static_cast<int>(A.rows());

    Eigen::MatrixXd penalty = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 1; j < p; ++j) penalty(j, j) = opt.ridge;

    auto hessian = [&](const Eigen::VectorXd& b) {
        const Eigen::VectorXd eta = A * b;
        Eigen::VectorXd w(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double m = sigmoid(eta(i));
            w(i) = m * (1.0 - m);
        }
        Eigen::MatrixXd H = A.transpose() * w.asDiagonal() * A;
        return Eigen::MatrixXd(H + penalty);
    };

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    beta(0) = logit(ones / static_cast<double>(y.size()));
    double ll = logistic_log_likelihood(A, y, beta, opt.ridge);
    r.ll_trace.push_back(ll);

    for (int it = 0; it < opt.max_iter; ++it) {
        r.iterations = it + 1;
        const Eigen::VectorXd step = hessian(beta).ldlt().solve(logistic_gradient(A, y, beta, opt.ridge));
        double t = 1.0;
        Eigen::VectorXd candidate = beta + step;
        double ll_new = logistic_log_likelihood(A, y, candidate, opt.ridge);
        for (int h = 0; h < 30 && !(ll_new >= ll); ++h) {
            t *= 0.5;
            candidate = beta + t * step;
            ll_new = logistic_log_likelihood(A, y, candidate, opt.ridge);
        }
        if (!(ll_new >= ll)) {
            r.converged = true;  // no ascent direction left at machine precision
            break;
        }
        const double gain = ll_new - ll;
        beta = candidate;
        ll = ll_new;
        r.ll_trace.push_back(ll);
        if (gain <= opt.tol * (1.0 + std::abs(ll)) && (t * step).cwiseAbs().maxCoeff() < 1e-6) {
            r.converged = true;
            break;
        }
    }

    const Eigen::VectorXd eta = A * beta;
    bool perfect = true;
    for (Eigen::Index i = 0; i < eta.size() && perfect; ++i) perfect = (eta(i) > 0.0) == (y(i) > 0.5);
    r.separated = perfect;

    const Eigen::MatrixXd cov = hessian(beta).inverse();
    for (Eigen::Index i = 0; i < p; ++i) {
        r.coefficients.push_back(beta(i));
        r.standard_errors.push_back(std::sqrt(std::max(0.0, cov(i, i))));
    }
    return r;
}

}  // namespace cogbench::numopt
