// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "loadrec/fft.hpp"
#include "loadrec/parallel.hpp"
#include "loadrec/rng.hpp"

namespace loadrec {

using std::numbers::pi;

Spectrum fft_magnitude(const TimeSeries& series) {
    series.require_uniform_dt();
    const double fs = series.sampling_rate();
    const Eigen::Index n = series.size();
    const auto coeffs = fft::rfft(series.values());
    const Eigen::Index nf = static_cast<Eigen::Index>(coeffs.size());

    Spectrum spec;
    spec.f.resize(nf);
    spec.magnitude.resize(nf);
    for (Eigen::Index k = 0; k < nf; ++k) {
        spec.f[k] = fs * static_cast<double>(k) / static_cast<double>(n);
        const bool edge = (k == 0) || (n % 2 == 0 && k == nf - 1);
        const double scale = (edge ? 1.0 : 2.0) / static_cast<double>(n);
        spec.magnitude[k] = scale * std::abs(coeffs[static_cast<size_t>(k)]);
    }
    return spec;
}

Spectrum psd(const TimeSeries& series, const WelchConfig& cfg) {
    series.require_uniform_dt();
    const double fs = series.sampling_rate();
    const Eigen::Index n = series.size();

    Eigen::Index seg = cfg.segment_length;
    if (seg <= 0) seg = std::max<Eigen::Index>(2, n / 8);
    if (seg > n)
        throw InsufficientLength("series shorter than Welch segment length");
    if (cfg.overlap < 0.0 || cfg.overlap >= 1.0)
        throw ValidationError("Welch overlap must lie in [0, 1)");
    const Eigen::Index hop = std::max<Eigen::Index>(
        1, seg - static_cast<Eigen::Index>(std::floor(
               static_cast<double>(seg) * cfg.overlap)));

    Eigen::VectorXd window(seg);
    for (Eigen::Index i = 0; i < seg; ++i)
        window[i] = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) /
                                         static_cast<double>(seg - 1));
    const double win_energy = window.squaredNorm();

    const Eigen::Index nf = seg / 2 + 1;
    Eigen::VectorXd accum = Eigen::VectorXd::Zero(nf);
    Eigen::Index n_segments = 0;
    for (Eigen::Index start = 0; start + seg <= n; start += hop) {
        Eigen::VectorXd chunk =
            series.values().segment(start, seg).cwiseProduct(window);
        const auto coeffs = fft::rfft(chunk);
        for (Eigen::Index k = 0; k < nf; ++k) {
            const bool edge = (k == 0) || (seg % 2 == 0 && k == nf - 1);
            const double one_sided = edge ? 1.0 : 2.0;
            accum[k] += one_sided *
                        std::norm(coeffs[static_cast<size_t>(k)]) /
                        (fs * win_energy);
        }
        ++n_segments;
    }

    Spectrum spec;
    spec.f.resize(nf);
    for (Eigen::Index k = 0; k < nf; ++k)
        spec.f[k] = fs * static_cast<double>(k) / static_cast<double>(seg);
    spec.magnitude = accum / static_cast<double>(n_segments);
    return spec;
}

WaveletGrid morlet_cwt(const TimeSeries& series, double f0,
                       const Eigen::VectorXd& freqs, int threads) {
    const double dt = series.require_uniform_dt();
    const double nyquist = 0.5 / dt;
    if (f0 <= 0.0) throw ValidationError("Morlet f0 must be positive");
    for (Eigen::Index i = 0; i < freqs.size(); ++i)
        if (freqs[i] <= 0.0 || freqs[i] >= nyquist)
            throw FrequencyOutOfRange(
                "requested CWT frequency outside (0, Nyquist)");

    const Eigen::Index n = series.size();
    std::vector<std::complex<double>> base(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        base[static_cast<size_t>(i)] = series.values()[i];
    fft::transform(base, false);

    // Angular frequency of DFT bin k (negative for the upper half).
    auto omega_of_bin = [&](Eigen::Index k) {
        double f = static_cast<double>(k) / (static_cast<double>(n) * dt);
        if (k > n / 2) f -= 1.0 / dt;
        return 2.0 * pi * f;
    };

    WaveletGrid grid;
    grid.f = freqs;
    grid.t = series.t();
    grid.f0 = f0;
    grid.coefficients.resize(freqs.size(), n);

    const double omega0 = 2.0 * pi * f0;
    parallel_for(
        static_cast<size_t>(freqs.size()),
        [&](size_t row) {
            const double scale = f0 / freqs[static_cast<Eigen::Index>(row)];
            std::vector<std::complex<double>> work(base);
            for (Eigen::Index k = 0; k < n; ++k) {
                const double w = omega_of_bin(k);
                // One-sided Gaussian filter: positive frequencies only, gain 2,
                // so |W| recovers the amplitude of a real sinusoid.
                double gain = 0.0;
                if (w > 0.0) {
                    const double d = scale * w - omega0;
                    gain = 2.0 * std::exp(-0.5 * d * d);
                }
                work[static_cast<size_t>(k)] *= gain;
            }
            fft::transform(work, true);
            for (Eigen::Index i = 0; i < n; ++i)
                grid.coefficients(static_cast<Eigen::Index>(row), i) =
                    work[static_cast<size_t>(i)];
        },
        threads);

    grid.cone_of_influence.resize(n);
    const double t0 = series.t()[0];
    const double t_end = series.t()[n - 1];
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dist = std::min(series.t()[i] - t0, t_end - series.t()[i]);
        grid.cone_of_influence[i] =
            dist > 0.0 ? std::numbers::sqrt2 * f0 / dist
                       : std::numeric_limits<double>::infinity();
    }
    return grid;
}

TimeSeries add_white_noise(const TimeSeries& series, double snr,
                           std::uint64_t seed) {
    if (!(snr > 0.0)) throw ValidationError("snr must be positive");
    if (snr >= 1e12) return series;
    const double sigma = series.values().cwiseAbs().maxCoeff() / snr;
    Rng rng(seed);
    Eigen::VectorXd noisy = series.values();
    for (Eigen::Index i = 0; i < noisy.size(); ++i)
        noisy[i] += sigma * rng.normal();
    return series.with_values(std::move(noisy));
}

TimeSeries detrend_mean(const TimeSeries& series, double* removed) {
    const double mean = series.values().mean();
    if (removed) *removed = mean;
    return series.with_values(series.values().array() - mean);
}

} // namespace loadrec
