#pragma once

// Bounded Nelder-Mead started from the best points of a coarse grid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cogbench/core/error.hpp"

namespace cogbench::numopt {

using Params = std::vector<double>;
using Objective = std::function<double(const Params&)>;

struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
};

struct OptResult {
    Params params;
    double nll = std::numeric_limits<double>::infinity();
    int iterations = 0;
    int restarts_used = 0;
    /// Lowest objective value among the grid starting points.
    double grid_best = std::numeric_limits<double>::infinity();
};

struct OptOptions {
    int grid_points = 5;
    int max_starts = 10;
    int restarts = 1;
    int max_iter = 2000;
    double f_tol = 1e-10;
    double x_tol = 1e-8;
};

inline Params clamp_to(const Params& x, const std::vector<Bounds>& b) {
    Params out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], b[i].lo, b[i].hi);
    return out;
}

/// Nelder-Mead with points clamped into the box. Non-finite values count as +inf.
inline OptResult nelder_mead(const Objective& f, Params x0, const std::vector<Bounds>& bounds, const OptOptions& opt = {}) {
    const std::size_t n = x0.size();
    auto eval = [&](const Params& x) {
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<Params> simplex{clamp_to(x0, bounds)};
    for (std::size_t i = 0; i < n; ++i) {
        Params x = simplex[0];
        const double step = 0.1 * (bounds[i].hi - bounds[i].lo);
        x[i] = x[i] + step <= bounds[i].hi ? x[i] + step : x[i] - step;
        simplex.push_back(clamp_to(x, bounds));
    }
    std::vector<double> fv(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(simplex.size());
    OptResult res;
    for (int it = 0; it < opt.max_iter; ++it) {
        res.iterations = it + 1;
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

        double spread = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t d = 0; d < n; ++d) spread = std::max(spread, std::abs(simplex[i][d] - simplex[best][d]));
        if (std::isfinite(fv[worst]) && fv[worst] - fv[best] <= opt.f_tol * (1.0 + std::abs(fv[best])) &&
            spread <= opt.x_tol)
            break;
        if (spread <= opt.x_tol * 1e-3) break;

        Params centroid(n, 0.0);
        for (std::size_t i : order)
            if (i != worst)
                for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / static_cast<double>(n);
        auto along = [&](double t) {
            Params x(n);
            for (std::size_t d = 0; d < n; ++d) x[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
            return clamp_to(x, bounds);
        };

        const Params xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            const Params xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) simplex[worst] = xe, fv[worst] = fe;
            else simplex[worst] = xr, fv[worst] = fr;
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr, fv[worst] = fr;
            continue;
        }
        const Params xc = fr < fv[worst] ? along(-0.5) : along(0.5);
        const double fc = eval(xc);
        if (fc < std::min(fr, fv[worst])) {
            simplex[worst] = xc, fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t d = 0; d < n; ++d) simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
            fv[i] = eval(simplex[i]);
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    res.params = simplex[static_cast<std::size_t>(it - fv.begin())];
    res.nll = *it;
    return res;
}

/// Evaluates a grid_points^d grid at cell centres, then runs Nelder-Mead from the
/// best max_starts points and restarts from each result. Never returns a point
/// worse than the best grid point.
inline OptResult minimize_nll(const Objective& f, const std::vector<Bounds>& bounds, const OptOptions& opt = {}) {
    const std::size_t d = bounds.size();
    if (d == 0) throw OptimizationError("minimize_nll: no parameters");
    for (const auto& b : bounds)
        if (!(b.lo <= b.hi)) throw OptimizationError("minimize_nll: inverted bounds");

    std::vector<std::pair<double, Params>> starts;
    std::vector<int> idx(d, 0);
    while (true) {
        Params x(d);
        for (std::size_t i = 0; i < d; ++i)
            x[i] = bounds[i].lo + (idx[i] + 0.5) / opt.grid_points * (bounds[i].hi - bounds[i].lo);
        const double v = f(x);
        if (std::isfinite(v)) starts.emplace_back(v, x);
        std::size_t k = 0;
        while (k < d && ++idx[k] == opt.grid_points) idx[k++] = 0;
        if (k == d) break;
    }
    if (starts.empty()) throw OptimizationError("minimize_nll: objective is non-finite at every grid point");
    std::stable_sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    OptResult best;
    best.params = starts.front().second;
    best.nll = starts.front().first;
    best.grid_best = best.nll;
    const std::size_t n_starts = std::min<std::size_t>(starts.size(), static_cast<std::size_t>(opt.max_starts));
    for (std::size_t s = 0; s < n_starts; ++s) {
        OptResult r = nelder_mead(f, starts[s].second, bounds, opt);
        int total = r.iterations;
        int used = 0;
        for (int k = 0; k < opt.restarts; ++k) {
            OptResult again = nelder_mead(f, r.params, bounds, opt);
            total += again.iterations;
            ++used;
            if (again.nll < r.nll) r = again;
        }
        best.iterations += total;
        best.restarts_used += used;
        if (r.nll < best.nll) {
            best.params = r.params;
            best.nll = r.nll;
        }
    }
    if (!std::isfinite(best.nll)) throw OptimizationError("minimize_nll: no finite optimum found");
    return best;
}

}  // namespace cogbench::numopt
