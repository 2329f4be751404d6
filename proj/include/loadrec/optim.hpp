// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <Eigen/Core>
#include <functional>

namespace loadrec {

struct SimplexOptions {
    int max_iterations = 0;   // 0: 400 * dimension
    double parameter_tol = 1e-6;
    double value_tol = 1e-10;
    double initial_step = 0.8;
};

struct SimplexResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead minimisation with standard coefficients
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5). The objective may
/// return +inf to reject a point. Fully deterministic for a given start.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0,
                          const SimplexOptions& opts = {});

} // namespace loadrec
