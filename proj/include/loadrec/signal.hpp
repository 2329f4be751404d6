// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <cstdint>

#include "loadrec/time_series.hpp"

namespace loadrec {

/// One-sided amplitude spectrum of a uniformly sampled signal.
///
/// Normalization: magnitude(f_k) = (2 / N_t) |DFT_k| for interior bins and
/// (1 / N_t) |DFT_k| at DC and Nyquist, so a unit-amplitude sinusoid on a bin
/// frequency yields magnitude 1 at that bin. This makes the extracted basis
/// scales carry physical signal amplitude.
Spectrum fft_magnitude(const TimeSeries& series);

struct WelchConfig {
    Eigen::Index segment_length = 0; // 0: N_t / 8
    double overlap = 0.5;            // fraction of segment length
};

/// One-sided power spectral density by Welch's method with a Hann window.
/// White noise of variance s^2 integrates to level s^2 / (fs / 2).
Spectrum psd(const TimeSeries& series, const WelchConfig& cfg = {});

/// Complex Morlet continuous wavelet transform, computed row-by-row in the
/// frequency domain. f0 is the wavelet central frequency in Hz; a target
/// frequency f is analysed at scale s = f0 / f. Coefficients are scaled so a
/// unit-amplitude sinusoid at f gives |W(f, t)| close to 1 inside the cone of
/// influence. Rows may be computed in parallel; the result is bit-identical
/// to the sequential order.
WaveletGrid morlet_cwt(const TimeSeries& series, double f0,
                       const Eigen::VectorXd& freqs, int threads = 0);

/// Adds i.i.d. Gaussian noise with sigma = max|values| / snr. snr >= 1e12 is
/// treated as the noiseless limit and returns the input unchanged.
/// Deterministic for a given seed.
TimeSeries add_white_noise(const TimeSeries& series, double snr,
                           std::uint64_t seed);

/// Subtracts the sample mean; the removed offset is reported if requested.
TimeSeries detrend_mean(const TimeSeries& series, double* removed = nullptr);

} // namespace loadrec
