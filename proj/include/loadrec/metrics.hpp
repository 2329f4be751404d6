// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <string>
#include <vector>

#include "loadrec/time_series.hpp"

namespace loadrec::metrics {

struct MetricConfig {
    // Sensitivity of each exponent-based metric: M = exp(-lambda * A).
    double lambda_rms = 1.0;
    double lambda_c = 1.0;
    double lambda_phi = 1.0;
    double lambda_peak = 1.0;
    double lambda_m = 1.0;
    double lambda_w = 1.0;

    double t_c = 0.0; // phase normalisation delay, seconds; 0: 10% of duration

    double wavelet_f0 = 4.0;
    int wavelet_n_freqs = 40;
    double wavelet_f_min = 0.0; // 0: 2 / duration
    double wavelet_f_max = 0.0; // 0: 0.45 * fs

    double dtw_radius = 0.1; // Sakoe-Chiba band as a fraction of length
};

/// Raw metric exponents A(x, y); zero means identical signals.
struct MetricExponents {
    double a_rms = 0.0;
    double a_c = 0.0;
    double a_phi = 0.0;
    double a_peak = 0.0;
    double a_m = 0.0;
    double a_w = 0.0;
};

/// All seven comparison metrics. The exponent-based six lie in [0, 1]; m_r2
/// has a maximum of 1 and is unbounded below. Metrics that cannot be computed
/// (zero-variance input for m_c / m_r2) are NaN with a note in issues.
struct MetricReport {
    double m_rms = 0.0;
    double m_c = 0.0;
    double m_phi = 0.0;
    double m_peak = 0.0;
    double m_m = 0.0;
    double m_w = 0.0;
    double m_r2 = 0.0;
    int wavelet_skipped_rows = 0;
    std::vector<std::string> issues;
};

/// Compares a candidate y against a reference x sharing the same uniform time
/// grid (length >= 16).
///
/// The correlation exponent is implemented as A_c = 1 - corr(x, y), so that
/// perfectly correlated signals score M_c = 1.
MetricReport compare(const TimeSeries& x, const TimeSeries& y,
                     const MetricConfig& cfg = {});

/// Time-frequency comparison: per-frequency normalised wavelet magnitude
/// differences integrated over the cone of influence. Returns the metric
/// value exp(-lambda_w * A_w); all-zero frequency rows are skipped and
/// counted.
double wavelet_metric(const TimeSeries& x, const TimeSeries& y,
                      const MetricConfig& cfg = {},
                      int* skipped_rows = nullptr);

/// Raw exponents without the exponential mapping (m_r2 is not exponent-based
/// and is excluded).
MetricExponents exponents(const TimeSeries& x, const TimeSeries& y,
                          const MetricConfig& cfg = {});

/// Dynamic time warping support: optimal alignment of x and y under a
/// squared-difference local cost with a Sakoe-Chiba band. Returns the two
/// warped sequences (equal length N_w >= N).
struct WarpedPair {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};
WarpedPair dtw_align(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                     double radius_fraction);

} // namespace loadrec::metrics
