// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "loadrec/fft.hpp"
#include "loadrec/signal.hpp"

namespace loadrec::metrics {

namespace {

double rms(const Eigen::VectorXd& x) {
    return std::sqrt(x.squaredNorm() / static_cast<double>(x.size()));
}

struct MomentStats {
    double mean_x = 0.0, mean_y = 0.0;
    double var_x = 0.0, var_y = 0.0; // sums of squared deviations
    double cov = 0.0;                // sum of cross deviations
};

MomentStats moments(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    MomentStats s;
    s.mean_x = x.mean();
    s.mean_y = y.mean();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double dx = x[i] - s.mean_x;
        const double dy = y[i] - s.mean_y;
        s.var_x += dx * dx;
        s.var_y += dy * dy;
        s.cov += dx * dy;
    }
    return s;
}

// Pearson correlation, with the Cauchy-Schwarz equality case pinned to +-1 so
// identical (or exactly proportional) inputs score exactly 1.
double correlation(const MomentStats& s) {
    const double denom_sq = s.var_x * s.var_y;
    if (s.cov * s.cov >= denom_sq) return s.cov >= 0.0 ? 1.0 : -1.0;
    return s.cov / std::sqrt(denom_sq);
}

// Lag (in samples, candidate relative to reference) maximising the linear
// cross-correlation, via zero-padded FFT. Ties resolve to the smallest |lag|.
Eigen::Index cross_correlation_peak_lag(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& y) {
    const Eigen::Index n = x.size();
    const size_t padded = static_cast<size_t>(2 * n);
    std::vector<std::complex<double>> fx(padded, 0.0), fy(padded, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        fx[static_cast<size_t>(i)] = x[i];
        fy[static_cast<size_t>(i)] = y[i];
    }
    fft::transform(fx, false);
    fft::transform(fy, false);
    for (size_t i = 0; i < padded; ++i) fx[i] = std::conj(fx[i]) * fy[i];
    fft::transform(fx, true);

    // fx[k] now holds sum_t x(t) y(t + k) for k >= 0 and the negative lags
    // wrapped at the top. Ties within rounding resolve to the smallest |lag|.
    double best = 0.0;
    Eigen::Index best_lag = 0;
    bool first = true;
    for (Eigen::Index lag = -(n - 1); lag <= n - 1; ++lag) {
        const size_t idx = static_cast<size_t>(
            lag >= 0 ? lag : static_cast<Eigen::Index>(padded) + lag);
        const double val = fx[idx].real();
        const double tol = 1e-12 * std::max(1.0, std::abs(best));
        if (first || val > best + tol) {
            best = val;
            best_lag = lag;
            first = false;
        } else if (val >= best - tol && std::abs(lag) < std::abs(best_lag)) {
            best_lag = lag;
        }
    }
    return best_lag;
}

void check_pair(const TimeSeries& x, const TimeSeries& y) {
    if (x.size() < 16)
        throw ValidationError("metric comparison needs at least 16 samples");
    if (x.size() != y.size() ||
        (x.t() - y.t()).cwiseAbs().maxCoeff() >
            1e-9 * std::max(1.0, x.duration()))
        throw ValidationError("metric comparison requires a shared time grid");
    x.require_uniform_dt();
}

void check_config(const MetricConfig& cfg) {
    for (double lambda : {cfg.lambda_rms, cfg.lambda_c, cfg.lambda_phi,
                          cfg.lambda_peak, cfg.lambda_m, cfg.lambda_w})
        if (!(lambda >= 0.0))
            throw ValidationError("metric sensitivities must be >= 0");
    if (cfg.t_c < 0.0)
        throw ValidationError("phase normalisation delay must be positive");
    if (cfg.wavelet_n_freqs < 2)
        throw ValidationError("wavelet grid needs at least 2 frequencies");
    if (!(cfg.dtw_radius > 0.0))
        throw ValidationError("dtw radius must be positive");
}

} // namespace

WarpedPair dtw_align(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                     double radius_fraction) {
    const Eigen::Index n = x.size();
    const Eigen::Index m = y.size();
    if (n == 0 || m == 0) throw ValidationError("dtw of empty sequence");
    // The band must be at least as wide as the length mismatch, or the end
    // cell is unreachable.
    const Eigen::Index radius = std::max<Eigen::Index>(
        {1, std::abs(n - m) + 1,
         static_cast<Eigen::Index>(std::llround(
             radius_fraction * static_cast<double>(std::max(n, m))))});

    const double inf = std::numeric_limits<double>::infinity();
    // Band-limited DP; costs kept for two rows, predecessor choices for all.
    const Eigen::Index band = 2 * radius + 1;
    auto band_col0 = [&](Eigen::Index i) {
        // Row i of the cost matrix covers columns [c0, c0 + band).
        const Eigen::Index diag =
            (m > 1 && n > 1) ? (i * (m - 1)) / std::max<Eigen::Index>(1, n - 1)
                             : 0;
        return std::clamp<Eigen::Index>(diag - radius, 0, std::max<Eigen::Index>(0, m - band));
    };

    std::vector<double> prev(static_cast<size_t>(band), inf);
    std::vector<double> curr(static_cast<size_t>(band), inf);
    std::vector<unsigned char> step(static_cast<size_t>(n * band), 3); // 0 diag, 1 up, 2 left

    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index c0 = band_col0(i);
        const Eigen::Index c0_prev = i > 0 ? band_col0(i - 1) : 0;
        std::fill(curr.begin(), curr.end(), inf);
        for (Eigen::Index b = 0; b < band; ++b) {
            const Eigen::Index j = c0 + b;
            if (j >= m) break;
            const double d = (x[i] - y[j]) * (x[i] - y[j]);
            if (i == 0 && j == 0) {
                curr[static_cast<size_t>(b)] = d;
                step[static_cast<size_t>(b)] = 3;
                continue;
            }
            auto prev_cost = [&](Eigen::Index jj) {
                const Eigen::Index bb = jj - c0_prev;
                return (i > 0 && bb >= 0 && bb < band && jj >= 0)
                           ? prev[static_cast<size_t>(bb)]
                           : inf;
            };
            auto curr_cost = [&](Eigen::Index jj) {
                const Eigen::Index bb = jj - c0;
                return (bb >= 0 && bb < band && jj >= 0)
                           ? curr[static_cast<size_t>(bb)]
                           : inf;
            };
            const double from_diag = prev_cost(j - 1);
            const double from_up = prev_cost(j);
            const double from_left = curr_cost(j - 1);
            double best = from_diag;
            unsigned char s = 0;
            if (from_up < best) {
                best = from_up;
                s = 1;
            }
            if (from_left < best) {
                best = from_left;
                s = 2;
            }
            if (best == inf) continue;
            curr[static_cast<size_t>(b)] = best + d;
            step[static_cast<size_t>(i * band + b)] = s;
        }
        prev.swap(curr);
    }

    // Backtrack from (n-1, m-1).
    std::vector<std::pair<Eigen::Index, Eigen::Index>> path;
    Eigen::Index i = n - 1, j = m - 1;
    while (true) {
        path.emplace_back(i, j);
        if (i == 0 && j == 0) break;
        const Eigen::Index b = j - band_col0(i);
        const unsigned char s =
            (b >= 0 && b < band)
                ? step[static_cast<size_t>(i * band + b)]
                : static_cast<unsigned char>(0);
        if (s == 3) break;
        if (s == 0) {
            i = std::max<Eigen::Index>(0, i - 1);
            j = std::max<Eigen::Index>(0, j - 1);
        } else if (s == 1) {
            i = std::max<Eigen::Index>(0, i - 1);
        } else {
            j = std::max<Eigen::Index>(0, j - 1);
        }
    }
    std::reverse(path.begin(), path.end());

    WarpedPair warped;
    warped.x.resize(static_cast<Eigen::Index>(path.size()));
    warped.y.resize(static_cast<Eigen::Index>(path.size()));
    for (size_t k = 0; k < path.size(); ++k) {
        warped.x[static_cast<Eigen::Index>(k)] = x[path[k].first];
        warped.y[static_cast<Eigen::Index>(k)] = y[path[k].second];
    }
    return warped;
}

namespace {

double wavelet_exponent(const TimeSeries& x, const TimeSeries& y,
                        const MetricConfig& cfg, int* skipped_rows) {
    check_pair(x, y);
    check_config(cfg);
    const double fs = x.sampling_rate();
    const double duration = x.duration();
    const double f_min =
        cfg.wavelet_f_min > 0.0 ? cfg.wavelet_f_min : 2.0 / duration;
    const double f_max =
        cfg.wavelet_f_max > 0.0 ? cfg.wavelet_f_max : 0.45 * fs;
    if (!(f_min < f_max))
        throw ValidationError("wavelet metric frequency band is empty");
    Eigen::VectorXd freqs(cfg.wavelet_n_freqs);
    for (int i = 0; i < cfg.wavelet_n_freqs; ++i)
        freqs[i] = f_min * std::pow(f_max / f_min,
                                    static_cast<double>(i) /
                                        static_cast<double>(
                                            cfg.wavelet_n_freqs - 1));

    const WaveletGrid wx = morlet_cwt(x, cfg.wavelet_f0, freqs);
    const WaveletGrid wy = morlet_cwt(y, cfg.wavelet_f0, freqs);
    const Eigen::Index nf = freqs.size();
    const Eigen::Index nt = x.size();

    // Per-frequency normalisation by each signal's own in-cone maximum.
    Eigen::VectorXd max_x = Eigen::VectorXd::Zero(nf);
    Eigen::VectorXd max_y = Eigen::VectorXd::Zero(nf);
    for (Eigen::Index fi = 0; fi < nf; ++fi)
        for (Eigen::Index ti = 0; ti < nt; ++ti)
            if (wx.inside_cone(fi, ti)) {
                max_x[fi] = std::max(max_x[fi], std::abs(wx.coefficients(fi, ti)));
                max_y[fi] = std::max(max_y[fi], std::abs(wy.coefficients(fi, ti)));
            }
    int skipped = 0;
    std::vector<bool> row_ok(static_cast<size_t>(nf));
    for (Eigen::Index fi = 0; fi < nf; ++fi) {
        row_ok[static_cast<size_t>(fi)] = max_x[fi] > 0.0 && max_y[fi] > 0.0;
        if (!row_ok[static_cast<size_t>(fi)]) ++skipped;
    }
    if (skipped_rows) *skipped_rows = skipped;

    // Time profile of the frequency-integrated normalised difference.
    Eigen::VectorXd profile = Eigen::VectorXd::Zero(nt);
    std::vector<bool> t_ok(static_cast<size_t>(nt), false);
    for (Eigen::Index ti = 0; ti < nt; ++ti) {
        double num = 0.0, den = 0.0;
        bool have_prev = false;
        double prev_f = 0.0, prev_num = 0.0, prev_den = 0.0;
        for (Eigen::Index fi = 0; fi < nf; ++fi) {
            if (!row_ok[static_cast<size_t>(fi)] || !wx.inside_cone(fi, ti))
                continue;
            const double gx = std::abs(wx.coefficients(fi, ti)) / max_x[fi];
            const double gy = std::abs(wy.coefficients(fi, ti)) / max_y[fi];
            const double di = (gx - gy) * (gx - gy);
            const double ei = gx * gx;
            if (have_prev) {
                const double df = freqs[fi] - prev_f;
                num += 0.5 * (di + prev_num) * df;
                den += 0.5 * (ei + prev_den) * df;
            }
            prev_f = freqs[fi];
            prev_num = di;
            prev_den = ei;
            have_prev = true;
        }
        if (den > 0.0) {
            profile[ti] = std::sqrt(num) / std::sqrt(den);
            t_ok[static_cast<size_t>(ti)] = true;
        }
    }

    // Average the profile over the usable time span.
    double integral = 0.0, span = 0.0;
    for (Eigen::Index ti = 0; ti + 1 < nt; ++ti) {
        if (!t_ok[static_cast<size_t>(ti)] || !t_ok[static_cast<size_t>(ti + 1)])
            continue;
        const double dt = x.t()[ti + 1] - x.t()[ti];
        integral += 0.5 * (profile[ti] + profile[ti + 1]) * dt;
        span += dt;
    }
    return span > 0.0 ? integral / span : 0.0;
}

} // namespace

double wavelet_metric(const TimeSeries& x, const TimeSeries& y,
                      const MetricConfig& cfg, int* skipped_rows) {
    return std::exp(-cfg.lambda_w * wavelet_exponent(x, y, cfg, skipped_rows));
}

MetricExponents exponents(const TimeSeries& x, const TimeSeries& y,
                          const MetricConfig& cfg) {
    check_pair(x, y);
    check_config(cfg);
    MetricExponents a;
    const Eigen::VectorXd& xv = x.values();
    const Eigen::VectorXd& yv = y.values();

    const double rms_x = rms(xv);
    const double rms_y = rms(yv);
    a.a_rms = rms_x > 0.0
                  ? std::abs(rms_x - rms_y) / rms_x
                  : (rms_y > 0.0 ? std::numeric_limits<double>::infinity()
                                 : 0.0);

    const MomentStats stats = moments(xv, yv);
    a.a_c = (stats.var_x > 0.0 && stats.var_y > 0.0)
                ? 1.0 - correlation(stats)
                : std::numeric_limits<double>::quiet_NaN();

    const double dt = x.require_uniform_dt();
    const double t_c = cfg.t_c > 0.0 ? cfg.t_c : 0.1 * x.duration();
    const Eigen::Index lag = cross_correlation_peak_lag(xv, yv);
    a.a_phi = std::abs(static_cast<double>(lag)) * dt / t_c;

    const double peak_x = xv.cwiseAbs().maxCoeff();
    const double peak_y = yv.cwiseAbs().maxCoeff();
    a.a_peak = peak_x > 0.0
                   ? std::abs(peak_x - peak_y) / peak_x
                   : (peak_y > 0.0 ? std::numeric_limits<double>::infinity()
                                   : 0.0);

    const WarpedPair warped = dtw_align(xv, yv, cfg.dtw_radius);
    const double rms_wx = rms(warped.x);
    a.a_m = rms_wx > 0.0 ? rms(warped.x - warped.y) / rms_wx
                         : (rms(warped.y) > 0.0
                                ? std::numeric_limits<double>::infinity()
                                : 0.0);

    int skipped = 0;
    a.a_w = wavelet_exponent(x, y, cfg, &skipped);
    return a;
}

MetricReport compare(const TimeSeries& x, const TimeSeries& y,
                     const MetricConfig& cfg) {
    check_pair(x, y);
    check_config(cfg);
    MetricReport report;
    const Eigen::VectorXd& xv = x.values();
    const Eigen::VectorXd& yv = y.values();

    const double rms_x = rms(xv);
    const double rms_y = rms(yv);
    report.m_rms =
        rms_x > 0.0
            ? std::exp(-cfg.lambda_rms * std::abs(rms_x - rms_y) / rms_x)
            : (rms_y > 0.0 ? 0.0 : 1.0);

    const MomentStats stats = moments(xv, yv);
    if (stats.var_x > 0.0 && stats.var_y > 0.0) {
        report.m_c = std::exp(-cfg.lambda_c * (1.0 - correlation(stats)));
    } else {
        report.m_c = std::numeric_limits<double>::quiet_NaN();
        report.issues.push_back("ZeroVarianceSignal: m_c unavailable");
    }

    const double dt = x.require_uniform_dt();
    const double t_c = cfg.t_c > 0.0 ? cfg.t_c : 0.1 * x.duration();
    const Eigen::Index lag = cross_correlation_peak_lag(xv, yv);
    report.m_phi = std::exp(-cfg.lambda_phi *
                            std::abs(static_cast<double>(lag)) * dt / t_c);

    const double peak_x = xv.cwiseAbs().maxCoeff();
    const double peak_y = yv.cwiseAbs().maxCoeff();
    report.m_peak =
        peak_x > 0.0
            ? std::exp(-cfg.lambda_peak * std::abs(peak_x - peak_y) / peak_x)
            : (peak_y > 0.0 ? 0.0 : 1.0);

    const WarpedPair warped = dtw_align(xv, yv, cfg.dtw_radius);
    const double rms_wx = rms(warped.x);
    report.m_m =
        rms_wx > 0.0
            ? std::exp(-cfg.lambda_m * rms(warped.x - warped.y) / rms_wx)
            : (rms(warped.y) > 0.0 ? 0.0 : 1.0);

    report.m_w = wavelet_metric(x, y, cfg, &report.wavelet_skipped_rows);

    if (stats.var_x > 0.0) {
        report.m_r2 = 1.0 - (xv - yv).squaredNorm() / stats.var_x;
    } else {
        report.m_r2 = std::numeric_limits<double>::quiet_NaN();
        report.issues.push_back("ZeroVarianceSignal: m_r2 unavailable");
    }
    return report;
}

} // namespace loadrec::metrics
