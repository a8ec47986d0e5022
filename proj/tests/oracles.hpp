#pragma once

// Independent reference computations used to check the library's kernels.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "cogbench/cogbench.hpp"

namespace testutil {

/// OLS with intercept via the normal equations, Gauss-Jordan with partial pivoting.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
    const std::size_t n = X.size(), p = X[0].size() + 1;
    std::vector<std::vector<double>> M(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row{1.0};
        row.insert(row.end(), X[i].begin(), X[i].end());
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = 0; b < p; ++b) M[a][b] += row[a] * row[b];
            M[a][p] += row[a] * y[i];
        }
    }
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < p; ++r)
            if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
        std::swap(M[c], M[piv]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == c) continue;
            const double f = M[r][c] / M[c][c];
            for (std::size_t k = c; k <= p; ++k) M[r][k] -= f * M[c][k];
        }
    }
    std::vector<double> beta(p);
    for (std::size_t c = 0; c < p; ++c) beta[c] = M[c][p] / M[c][c];
    return beta;
}

inline Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& X) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(X.size()), static_cast<Eigen::Index>(X[0].size()));
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = 0; j < X[0].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = X[i][j];
    return m;
}

struct GridMinimum {
    double alpha = 0.0;
    double inverse_temperature = 0.0;
    double nll = std::numeric_limits<double>::infinity();
};

/// Exhaustive search of the single-rate RW likelihood. Steps are 1% of each bound
/// width: 0.01 in alpha over [0, 1], 0.2 in inverse temperature over [0, 20].
inline GridMinimum rw_grid_minimum(const std::vector<std::vector<cogbench::metrics::BanditChoice>>& data) {
    GridMinimum g;
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
            const double a = i * 0.01, b = j * 0.2;
            const double v = cogbench::metrics::rw_nll(data, a, a, b);
            if (v < g.nll) g = {a, b, v};
        }
    return g;
}

}  // namespace testutil
