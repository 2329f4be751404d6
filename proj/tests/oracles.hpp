// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

// Independent reference implementations used only to verify the library:
// a quadratic-cost DFT, dense-matrix Gaussian conditioning, finite
// differences and a Kolmogorov-Smirnov test. None of these share code with
// the implementation paths they check.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "loadrec/gp.hpp"

namespace oracles {

/// Direct O(N^2) DFT magnitude with the library's one-sided amplitude
/// normalisation, written without any FFT machinery.
inline Eigen::VectorXd naive_dft_magnitude(const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    const Eigen::Index nf = n / 2 + 1;
    Eigen::VectorXd mag(nf);
    for (Eigen::Index k = 0; k < nf; ++k) {
        std::complex<double> sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double angle = -2.0 * std::numbers::pi *
                                 static_cast<double>(k) *
                                 static_cast<double>(i) /
                                 static_cast<double>(n);
            sum += x[i] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        const bool edge = (k == 0) || (n % 2 == 0 && k == nf - 1);
        mag[k] = (edge ? 1.0 : 2.0) / static_cast<double>(n) * std::abs(sum);
    }
    return mag;
}

struct DenseGpResult {
    double lml = 0.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// Dense-matrix evaluation of the marginal likelihood and the conditional
/// force posterior: forms the full covariance Sigma = s2 Psi Psi^T + D,
/// factorises it and conditions directly. The noise diagonal must already
/// include any jitter so that both routes describe the same model.
inline DenseGpResult dense_gp(const Eigen::MatrixXd& psi_r,
                              const Eigen::VectorXd& noise_diag,
                              double sigma_s2, const Eigen::VectorXd& y,
                              const Eigen::MatrixXd& psi_pred) {
    const Eigen::Index n = psi_r.rows();
    Eigen::MatrixXd sigma = sigma_s2 * (psi_r * psi_r.transpose());
    sigma += noise_diag.asDiagonal();

    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    const Eigen::MatrixXd l = llt.matrixL();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) logdet += 2.0 * std::log(l(i, i));
    const Eigen::VectorXd alpha = llt.solve(y);

    DenseGpResult result;
    result.lml = -0.5 * (y.dot(alpha) + logdet +
                         static_cast<double>(n) *
                             std::log(2.0 * std::numbers::pi));
    const Eigen::MatrixXd cross =
        sigma_s2 * (psi_pred * psi_r.transpose()); // Np x N
    result.mean = cross * alpha;
    result.cov = sigma_s2 * (psi_pred * psi_pred.transpose()) -
                 cross * llt.solve(cross.transpose());
    return result;
}

/// Central finite difference of a vector-valued function of time.
template <typename Fn>
Eigen::VectorXd central_difference(const Fn& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

inline double normal_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

/// One-sample Kolmogorov-Smirnov statistic against N(mu, sigma^2).
inline double ks_statistic(std::vector<double> xs, double mu, double sigma) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double cdf = normal_cdf(xs[i], mu, sigma);
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    return d;
}

/// Asymptotic KS critical value at significance alpha.
inline double ks_critical(size_t n, double alpha) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c / std::sqrt(static_cast<double>(n));
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

inline double rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
    return (got - want).norm() / std::max(1e-300, want.norm());
}

inline double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
    return (got - want).norm() / std::max(1e-300, want.norm());
}

} // namespace oracles
