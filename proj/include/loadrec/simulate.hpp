// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loadrec/basis.hpp"
#include "loadrec/modal.hpp"
#include "loadrec/time_series.hpp"

namespace loadrec::sim {

/// One sinusoidal load component q(t) = a sin(2 pi f t) + b cos(2 pi f t).
struct HarmonicComponent {
    double frequency = 0.0; // Hz
    double a = 0.0;         // sine coefficient
    double b = 0.0;         // cosine coefficient

    static HarmonicComponent from_amplitude_phase(double amplitude,
                                                  double frequency,
                                                  double phase);
};

/// Dynamic load description. Harmonic-sum loads admit exact closed-form
/// responses; arbitrary sampled loads are integrated numerically.
class LoadSignal {
public:
    /// Single sinusoid amplitude * sin(2 pi f t + phase).
    static LoadSignal harmonic(double amplitude, double frequency,
                               double phase = 0.0);
    /// Sum of sinusoids.
    static LoadSignal harmonic_sum(std::vector<HarmonicComponent> components);
    /// Arbitrary sampled load (no closed form available).
    static LoadSignal sampled(TimeSeries series);

    bool is_harmonic_sum() const { return sampled_.empty(); }
    const std::vector<HarmonicComponent>& components() const {
        return components_;
    }
    const TimeSeries& sampled_series() const;

    /// Load values on a given grid.
    Eigen::VectorXd evaluate(const Eigen::VectorXd& t) const;
    double max_frequency() const;

private:
    std::vector<HarmonicComponent> components_;
    std::vector<TimeSeries> sampled_; // empty or one element
};

/// Low-pass shaped stationary Gaussian load synthesised from Fourier
/// coefficients on the bin grid k / duration for 0 < f <= f_max. The
/// amplitude envelope is exp(-(f / corner)^2) + floor, and the sine/cosine
/// coefficients are independent Gaussians under that envelope, scaled to the
/// requested rms. Deterministic for a given seed.
struct BroadbandShape {
    double corner_frequency = 0.5; // Hz
    double floor = 0.0;            // relative high-frequency floor
    double f_max = 10.0;           // Hz
    double rms = 1.0;
};

LoadSignal broadband_load(const BroadbandShape& shape, double duration,
                          std::uint64_t seed);

enum class SdofMethod {
    Auto,             // exact for harmonic sums, Newmark otherwise
    Newmark,          // average acceleration, beta = 1/4, gamma = 1/2
    ExactTransient,   // closed form from rest (harmonic sums only)
    ExactSteadyState, // closed-form periodic steady state (harmonic sums only)
};

struct SdofResponse {
    TimeSeries u;
    TimeSeries v;
    TimeSeries a;
    bool alias_risk = false; // fs <= 2 * max load frequency
};

/// Responses of one mode to a load, sampled at fs over the given duration
/// starting from rest. The Newmark path integrates any sampled load; harmonic
/// sums admit the exact transient-plus-steady solution or the pure steady
/// state (as measured after the transient has decayed, roughly
/// 10 / (zeta Omega_n) seconds).
SdofResponse sdof_response(const Oscillator& osc, const LoadSignal& load,
                           double fs, double duration,
                           SdofMethod method = SdofMethod::Auto);

struct MdofResult {
    std::vector<TimeSeries> modal_load_truth; // q_j = phi_j^T p
    std::vector<SdofResponse> modal;          // per-mode responses
    SensorArray sensors_u;
    SensorArray sensors_v;
    SensorArray sensors_a;
};

/// Projects nodal loads to modal space, integrates each mode, and superposes
/// back to sensor locations: q = Phi^T p, then z = Phi u per kind.
MdofResult mdof_modal_response(const ModeShapeSet& shapes,
                               const std::vector<LoadSignal>& nodal_loads,
                               double fs, double duration,
                               SdofMethod method = SdofMethod::Auto);

/// Monte Carlo accuracy study over one signal-property axis.
struct StudyConfig {
    enum class Axis { SamplingRate, Snr, InputType };
    Axis axis = Axis::SamplingRate;

    std::vector<double> dt_over_t{0.05, 0.10, 0.20, 0.30, 0.45};
    std::vector<double> snr_grid{3, 5, 10, 20, 50};

    int samples_per_point = 100;
    std::uint64_t seed = 0;

    double mass = 1.0;
    double zeta = 0.02;
    double f_n = 1.0;

    double fixed_snr = 15.0;
    double fixed_dt_over_t = 0.10;
    double duration_periods = 40.0;

    /// Load components as (frequency / f_n, relative force amplitude);
    /// frequencies snap to the bin grid of the simulated window and phases
    /// are randomised per sample. Components above Nyquist at a given
    /// sampling rate are skipped.
    std::vector<std::pair<double, double>> load_components{
        {0.55, 1.0}, {0.70, 1.0}, {0.85, 1.0}};

    /// Load used by the InputType axis. It carries above-resonance content
    /// that displacement spectra attenuate below the selection cutoff, which
    /// is what separates the input-type combinations.
    std::vector<std::pair<double, double>> input_type_components{
        {0.75, 1.0}, {1.30, 1.0}, {1.60, 0.55}, {2.60, 0.12}};

    /// Selection rule for the InputType axis; the softer cutoff keeps the
    /// above-resonance bins selectable from velocity and acceleration
    /// spectra while displacement spectra still straddle the threshold.
    CutoffRule input_type_rule = CutoffRule::mean_sigma(1.5);

    CutoffRule rule = CutoffRule::mean_sigma(2.0);

    int fit_starts = 2;
    int threads = 0;
};

struct StudyRow {
    std::string label;
    double axis_value = 0.0;
    double mean_r2 = 0.0;
    double q025 = 0.0;
    double q975 = 0.0;
    int n_failed = 0;
};

/// For each axis point, repeats generate -> simulate -> contaminate -> fit ->
/// predict -> R^2 against the true load. Per-sample seeds derive from the
/// master seed by counter, so parallel and serial runs agree exactly. Samples
/// whose fit fails are excluded and counted.
std::vector<StudyRow> run_study(const StudyConfig& cfg);

/// The seven input-type combinations used by the InputType axis, in order.
const std::vector<std::vector<SignalKind>>& input_type_combinations();
std::string input_type_label(const std::vector<SignalKind>& kinds);

/// Coefficient of determination of a prediction against a reference.
double r_squared(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred);

/// Linear-interpolation sample quantile of an unsorted copy of xs.
double quantile(std::vector<double> xs, double q);

} // namespace loadrec::sim
