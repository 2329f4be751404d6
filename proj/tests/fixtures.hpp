// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

// Shared synthetic systems used across the unit and acceptance suites.

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "loadrec/gp.hpp"
#include "loadrec/rng.hpp"
#include "loadrec/signal.hpp"
#include "loadrec/simulate.hpp"

namespace fixtures {

using namespace loadrec;

/// Lab-scale modal parameter set (mass kg, damping ratio, frequency Hz) of a
/// desk-size suspension-bridge model; used as realistic light-damping
/// oscillator constants.
inline std::vector<Oscillator> lab_scale_oscillators() {
    return {Oscillator(0.113, 0.0023, 2.090), Oscillator(0.378, 0.0036, 2.232),
            Oscillator(0.355, 0.0019, 3.801), Oscillator(0.027, 0.0032, 8.005)};
}

/// Clean on-bin SDOF scenario: exact from-rest responses to a harmonic sum.
struct SdofScenario {
    Oscillator osc{1.0, 0.02, 1.0};
    sim::SdofResponse responses;
    Eigen::VectorXd truth; // load on the response grid
    sim::LoadSignal load;
};

inline SdofScenario make_sdof_scenario(
    const Oscillator& osc, double dt_over_t, double duration_periods,
    const std::vector<std::pair<double, double>>& rel_components,
    std::uint64_t seed,
    sim::SdofMethod method = sim::SdofMethod::ExactTransient) {
    const double period = osc.natural_period();
    const double dt = dt_over_t * period;
    const Eigen::Index n = static_cast<Eigen::Index>(
        std::llround(duration_periods / dt_over_t));
    const double duration = static_cast<double>(n) * dt;

    Rng rng(derive_seed(seed, "sdof-scenario"));
    std::vector<sim::HarmonicComponent> comps;
    for (const auto& [rel_f, amp] : rel_components) {
        double f = rel_f * osc.f_n();
        f = std::max(1.0, std::round(f * duration)) / duration; // on-bin
        comps.push_back(sim::HarmonicComponent::from_amplitude_phase(
            amp, f, rng.uniform(0.0, 2.0 * std::numbers::pi)));
    }
    SdofScenario scenario{osc,
                          sim::sdof_response(osc, sim::LoadSignal::harmonic(1, 1),
                                             1.0 / dt, duration),
                          Eigen::VectorXd(),
                          sim::LoadSignal::harmonic_sum(comps)};
    scenario.responses =
        sim::sdof_response(osc, scenario.load, 1.0 / dt, duration, method);
    scenario.truth = scenario.load.evaluate(scenario.responses.u.t());
    return scenario;
}

inline SdofScenario make_sdof_scenario(
    std::uint64_t seed = 7, double dt_over_t = 0.05,
    double duration_periods = 40.0,
    sim::SdofMethod method = sim::SdofMethod::ExactTransient) {
    return make_sdof_scenario(Oscillator(1.0, 0.02, 1.0), dt_over_t,
                              duration_periods, {{0.7, 1.0}}, seed, method);
}

/// Stack of (u, v, a) entries, optionally noise-contaminated, detrended.
inline DatasetStack make_stack(const sim::SdofResponse& resp, double snr,
                               std::uint64_t seed,
                               const std::vector<SignalKind>& kinds = {
                                   SignalKind::Displacement,
                                   SignalKind::Velocity,
                                   SignalKind::Acceleration}) {
    DatasetStack stack;
    int group = 0;
    for (SignalKind kind : kinds) {
        const TimeSeries* src = nullptr;
        switch (kind) {
        case SignalKind::Displacement: src = &resp.u; break;
        case SignalKind::Velocity: src = &resp.v; break;
        case SignalKind::Acceleration: src = &resp.a; break;
        default: throw ValidationError("fixture kinds must be responses");
        }
        TimeSeries series = snr > 0.0
                                ? add_white_noise(*src, snr,
                                                  derive_seed(seed, "noise",
                                                              static_cast<std::uint64_t>(group)))
                                : *src;
        stack.entries.push_back({detrend_mean(series), group});
        ++group;
    }
    stack.reference = 0;
    return stack;
}

/// Euler-Bernoulli cantilever mode shapes evaluated at equally spaced
/// stations (the free end included), magnitude-normalised per mode.
inline Eigen::MatrixXd cantilever_mode_shapes(Eigen::Index n_sensors,
                                              Eigen::Index n_modes) {
    static const double beta_l[] = {1.8751040687119611, 4.6940911329741746,
                                    7.8547574382376126, 10.995540734875467,
                                    14.137168391046106, 17.278759657399481};
    Eigen::MatrixXd phi(n_sensors, n_modes);
    for (Eigen::Index j = 0; j < n_modes; ++j) {
        const double bl = beta_l[j];
        const double sigma = (std::sinh(bl) - std::sin(bl)) /
                             (std::cosh(bl) + std::cos(bl));
        for (Eigen::Index s = 0; s < n_sensors; ++s) {
            const double x = static_cast<double>(s + 1) /
                             static_cast<double>(n_sensors);
            const double bx = bl * x;
            phi(s, j) = (std::cosh(bx) - std::cos(bx)) -
                        sigma * (std::sinh(bx) - std::sin(bx));
        }
        phi.col(j) /= phi.col(j).cwiseAbs().maxCoeff();
    }
    return phi;
}

/// Six-mode broadband cantilever scenario: independent low-pass Gaussian
/// loads at each sensor station, exact per-mode responses, both modal and
/// sensor-space views.
struct MdofScenario {
    ModeShapeSet shapes;
    sim::MdofResult result;
    double fs = 20.0;
    double duration = 300.0;
};

inline MdofScenario make_mdof_scenario(std::uint64_t seed = 11,
                                       double duration = 300.0,
                                       double fs = 20.0) {
    const Eigen::Index n_sensors = 10;
    const Eigen::Index n_modes = 6;
    Eigen::MatrixXd phi = cantilever_mode_shapes(n_sensors, n_modes);

    Eigen::VectorXd f_ns(n_modes);
    const double f1 = 0.10;
    static const double beta_l[] = {1.8751040687119611, 4.6940911329741746,
                                    7.8547574382376126, 10.995540734875467,
                                    14.137168391046106, 17.278759657399481};
    for (Eigen::Index j = 0; j < n_modes; ++j)
        f_ns[j] = f1 * (beta_l[j] * beta_l[j]) / (beta_l[0] * beta_l[0]);
    Eigen::VectorXd masses = Eigen::VectorXd::Ones(n_modes);
    Eigen::VectorXd zetas = Eigen::VectorXd::Constant(n_modes, 0.015);

    ModeShapeSet shapes(phi, masses, zetas, f_ns);

    // Wind-like loading: energy concentrated below the first natural
    // frequency, with a small broadband floor that keeps every resonance
    // excited.
    sim::BroadbandShape shape;
    shape.corner_frequency = 0.05;
    shape.floor = 1e-3;
    shape.f_max = 0.475 * fs;
    shape.rms = 1.0;
    std::vector<sim::LoadSignal> nodal_loads;
    for (Eigen::Index s = 0; s < n_sensors; ++s)
        nodal_loads.push_back(sim::broadband_load(
            shape, duration, derive_seed(seed, "nodal-load",
                                         static_cast<std::uint64_t>(s))));

    MdofScenario scenario{shapes,
                          sim::mdof_modal_response(shapes, nodal_loads, fs,
                                                   duration),
                          fs, duration};
    return scenario;
}

/// Random low-rank instance for dense-oracle equivalence checks.
struct RandomInstance {
    DatasetStack stack;
    SpectralScales scales;
    Hyperparameters theta;
    Oscillator osc{1.0, 0.05, 1.0};
};

inline RandomInstance make_random_instance(std::uint64_t seed,
                                           int max_freqs = 10) {
    Rng rng(derive_seed(seed, "rand-instance"));
    RandomInstance inst;

    const int n_freqs =
        1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_freqs)));
    Eigen::VectorXd f(n_freqs), lambda(n_freqs);
    double freq = 0.0;
    for (int j = 0; j < n_freqs; ++j) {
        freq += 0.1 + rng.uniform() * 0.5;
        f[j] = freq;
        // Displacement-like decay keeps the derivative columns O(1), so the
        // instances stay well conditioned and a 1e-8 oracle match is
        // meaningful.
        const double w = 2.0 * std::numbers::pi * freq;
        lambda[j] = (0.2 + rng.uniform()) / (1.0 + w * w);
    }
    inst.scales = {f, lambda};

    const int n_entries = 1 + static_cast<int>(rng.below(3));
    const SignalKind kinds[] = {SignalKind::Displacement, SignalKind::Velocity,
                                SignalKind::Acceleration};
    Eigen::Index total = 0;
    for (int e = 0; e < n_entries; ++e) {
        const Eigen::Index n = 20 + static_cast<Eigen::Index>(rng.below(40));
        if (total + n > 200) break;
        total += n;
        Eigen::VectorXd t(n), x(n);
        double ti = rng.uniform() * 0.1;
        for (Eigen::Index i = 0; i < n; ++i) {
            ti += 0.02 + 0.03 * rng.uniform(); // non-uniform grid is fine
            t[i] = ti;
            x[i] = rng.normal();
        }
        inst.stack.entries.push_back(
            {TimeSeries(t, x, kinds[rng.below(3)]), e});
    }
    inst.theta.sigma_s2 = 0.05 + 2.0 * rng.uniform();
    inst.theta.sigma_n2.resize(static_cast<Eigen::Index>(inst.stack.entries.size()));
    for (Eigen::Index g = 0; g < inst.theta.sigma_n2.size(); ++g)
        inst.theta.sigma_n2[g] = 0.01 + rng.uniform();
    inst.osc = Oscillator(0.5 + rng.uniform(), 0.01 + 0.1 * rng.uniform(),
                          0.5 + rng.uniform());
    return inst;
}

} // namespace fixtures
