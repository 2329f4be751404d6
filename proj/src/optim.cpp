// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace loadrec {

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0,
                          const SimplexOptions& opts) {
    const int dim = static_cast<int>(x0.size());
    const int max_iter =
        opts.max_iterations > 0 ? opts.max_iterations : 400 * dim;

    std::vector<Eigen::VectorXd> pts(static_cast<size_t>(dim) + 1, x0);
    std::vector<double> vals(static_cast<size_t>(dim) + 1);
    SimplexResult result;

    // Callers optimise in log-space, so a constant additive step is a
    // multiplicative perturbation of each parameter.
    for (int i = 0; i < dim; ++i)
        pts[static_cast<size_t>(i) + 1][i] += opts.initial_step;

    for (size_t i = 0; i < pts.size(); ++i) {
        vals[i] = f(pts[i]);
        ++result.evaluations;
    }

    std::vector<size_t> order(pts.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return vals[a] < vals[b]; });
        std::vector<Eigen::VectorXd> p2(pts.size());
        std::vector<double> v2(vals.size());
        for (size_t i = 0; i < order.size(); ++i) {
            p2[i] = pts[order[i]];
            v2[i] = vals[order[i]];
        }
        pts.swap(p2);
        vals.swap(v2);
    };
    sort_simplex();

    for (int iter = 0; iter < max_iter; ++iter) {
        ++result.iterations;

        // Convergence: simplex collapsed in parameters or in values.
        double spread = 0.0;
        for (size_t i = 1; i < pts.size(); ++i)
            spread = std::max(spread,
                              (pts[i] - pts[0]).cwiseAbs().maxCoeff());
        const double vspread = std::abs(vals[vals.size() - 1] - vals[0]);
        if (spread < opts.parameter_tol &&
            (vspread < opts.value_tol * (1.0 + std::abs(vals[0])) ||
             !std::isfinite(vspread))) {
            result.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (size_t i = 0; i + 1 < pts.size(); ++i) centroid += pts[i];
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd& worst = pts[pts.size() - 1];
        const double f_best = vals[0];
        const double f_second = vals[vals.size() - 2];
        const double f_worst = vals[vals.size() - 1];

        Eigen::VectorXd reflected = centroid + (centroid - worst);
        double f_reflected = f(reflected);
        ++result.evaluations;

        if (f_reflected < f_best) {
            Eigen::VectorXd expanded = centroid + 2.0 * (centroid - worst);
            double f_expanded = f(expanded);
            ++result.evaluations;
            if (f_expanded < f_reflected) {
                pts[pts.size() - 1] = expanded;
                vals[vals.size() - 1] = f_expanded;
            } else {
                pts[pts.size() - 1] = reflected;
                vals[vals.size() - 1] = f_reflected;
            }
        } else if (f_reflected < f_second) {
            pts[pts.size() - 1] = reflected;
            vals[vals.size() - 1] = f_reflected;
        } else {
            const bool outside = f_reflected < f_worst;
            Eigen::VectorXd contracted =
                outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                        : Eigen::VectorXd(centroid - 0.5 * (centroid - worst));
            double f_contracted = f(contracted);
            ++result.evaluations;
            if (f_contracted < std::min(f_reflected, f_worst)) {
                pts[pts.size() - 1] = contracted;
                vals[vals.size() - 1] = f_contracted;
            } else {
                for (size_t i = 1; i < pts.size(); ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    vals[i] = f(pts[i]);
                    ++result.evaluations;
                }
            }
        }
        sort_simplex();
    }

    result.x = pts[0];
    result.value = vals[0];
    if (!std::isfinite(result.value))
        result.value = std::numeric_limits<double>::infinity();
    return result;
}

} // namespace loadrec
