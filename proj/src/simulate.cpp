// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "loadrec/gp.hpp"
#include "loadrec/parallel.hpp"
#include "loadrec/rng.hpp"
#include "loadrec/signal.hpp"

namespace loadrec::sim {

using std::numbers::pi;

HarmonicComponent HarmonicComponent::from_amplitude_phase(double amplitude,
                                                          double frequency,
                                                          double phase) {
    // A sin(wt + phi) = A cos(phi) sin(wt) + A sin(phi) cos(wt)
    return {frequency, amplitude * std::cos(phase),
            amplitude * std::sin(phase)};
}

LoadSignal LoadSignal::harmonic(double amplitude, double frequency,
                                double phase) {
    if (frequency < 0.0) throw ValidationError("load frequency must be >= 0");
    LoadSignal load;
    load.components_.push_back(
        HarmonicComponent::from_amplitude_phase(amplitude, frequency, phase));
    return load;
}

LoadSignal LoadSignal::harmonic_sum(std::vector<HarmonicComponent> components) {
    if (components.empty())
        throw ValidationError("harmonic sum needs at least one component");
    for (const auto& c : components)
        if (c.frequency < 0.0)
            throw ValidationError("load frequency must be >= 0");
    LoadSignal load;
    load.components_ = std::move(components);
    return load;
}

LoadSignal LoadSignal::sampled(TimeSeries series) {
    LoadSignal load;
    load.sampled_.push_back(std::move(series));
    return load;
}

const TimeSeries& LoadSignal::sampled_series() const {
    if (sampled_.empty())
        throw ValidationError("load has no sampled series");
    return sampled_[0];
}

Eigen::VectorXd LoadSignal::evaluate(const Eigen::VectorXd& t) const {
    if (!is_harmonic_sum()) {
        const auto& s = sampled_[0];
        if (s.size() != t.size() ||
            (s.t() - t).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, s.duration()))
            throw ValidationError("sampled load grid does not match request");
        return s.values();
    }
    Eigen::VectorXd q = Eigen::VectorXd::Zero(t.size());
    for (const auto& c : components_) {
        const double w = 2.0 * pi * c.frequency;
        for (Eigen::Index i = 0; i < t.size(); ++i)
            q[i] += c.a * std::sin(w * t[i]) + c.b * std::cos(w * t[i]);
    }
    return q;
}

double LoadSignal::max_frequency() const {
    if (!is_harmonic_sum()) {
        // No descriptor available; assume band-limited to Nyquist of its grid.
        return 0.5 / sampled_[0].require_uniform_dt();
    }
    double fmax = 0.0;
    for (const auto& c : components_) fmax = std::max(fmax, c.frequency);
    return fmax;
}

LoadSignal broadband_load(const BroadbandShape& shape, double duration,
                          std::uint64_t seed) {
    if (!(duration > 0.0)) throw ValidationError("duration must be positive");
    if (!(shape.corner_frequency > 0.0))
        throw ValidationError("corner frequency must be positive");
    const double df = 1.0 / duration;
    const int n_bins = static_cast<int>(std::floor(shape.f_max / df));
    if (n_bins < 1)
        throw ValidationError("f_max below the first frequency bin");

    Rng rng(derive_seed(seed, "broadband-load"));
    std::vector<HarmonicComponent> comps;
    comps.reserve(static_cast<size_t>(n_bins));
    double var = 0.0;
    for (int k = 1; k <= n_bins; ++k) {
        const double f = df * k;
        const double env =
            std::exp(-std::pow(f / shape.corner_frequency, 2.0)) + shape.floor;
        HarmonicComponent c;
        c.frequency = f;
        c.a = env * rng.normal();
        c.b = env * rng.normal();
        var += 0.5 * (c.a * c.a + c.b * c.b);
        comps.push_back(c);
    }
    const double scale = shape.rms / std::sqrt(var);
    for (auto& c : comps) {
        c.a *= scale;
        c.b *= scale;
    }
    return LoadSignal::harmonic_sum(std::move(comps));
}

namespace {

struct SteadyCoefficients {
    double alpha = 0.0; // sine coefficient of the displacement response
    double beta = 0.0;  // cosine coefficient
    double omega = 0.0;
};

SdofResponse pack_response(Eigen::VectorXd t, Eigen::VectorXd u,
                           Eigen::VectorXd v, Eigen::VectorXd a,
                           bool alias_risk) {
    SdofResponse out{
        TimeSeries(t, std::move(u), SignalKind::Displacement),
        TimeSeries(t, std::move(v), SignalKind::Velocity),
        TimeSeries(std::move(t), std::move(a), SignalKind::Acceleration),
        alias_risk};
    return out;
}

SdofResponse exact_response(const Oscillator& osc, const LoadSignal& load,
                            const Eigen::VectorXd& t, bool with_transient,
                            bool alias_risk) {
    const double m = osc.mass();
    const double wn = osc.omega_n();
    const double c = 2.0 * m * osc.zeta() * wn;
    const double k = m * wn * wn;

    std::vector<SteadyCoefficients> steady;
    steady.reserve(load.components().size());
    for (const auto& comp : load.components()) {
        const double w = 2.0 * pi * comp.frequency;
        const double km = k - m * w * w;
        const double cw = c * w;
        const double det = km * km + cw * cw;
        if (det <= 0.0)
            throw ValidationError(
                "undamped resonance: steady-state response is unbounded");
        SteadyCoefficients s;
        s.omega = w;
        s.alpha = (km * comp.a + cw * comp.b) / det;
        s.beta = (-cw * comp.a + km * comp.b) / det;
        steady.push_back(s);
    }

    const Eigen::Index n = t.size();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (const auto& s : steady) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sw = std::sin(s.omega * t[i]);
            const double cw_ = std::cos(s.omega * t[i]);
            u[i] += s.alpha * sw + s.beta * cw_;
            v[i] += s.omega * (s.alpha * cw_ - s.beta * sw);
        }
    }

    if (with_transient) {
        // Homogeneous part chosen so the total starts from rest.
        double u0 = 0.0, v0 = 0.0;
        for (const auto& s : steady) {
            u0 += s.beta;
            v0 += s.omega * s.alpha;
        }
        const double zeta = osc.zeta();
        const double wd = wn * std::sqrt(1.0 - zeta * zeta);
        const double c1 = -u0;
        const double c2 = (zeta * wn * c1 - v0) / wd;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double env = std::exp(-zeta * wn * t[i]);
            const double sd = std::sin(wd * t[i]);
            const double cd = std::cos(wd * t[i]);
            u[i] += env * (c1 * cd + c2 * sd);
            v[i] += env * ((wd * c2 - zeta * wn * c1) * cd -
                           (wd * c1 + zeta * wn * c2) * sd);
        }
    }

    const Eigen::VectorXd q = load.evaluate(t);
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i)
        a[i] = (q[i] - c * v[i] - k * u[i]) / m;
    return pack_response(t, std::move(u), std::move(v), std::move(a),
                         alias_risk);
}

SdofResponse newmark_response(const Oscillator& osc, const LoadSignal& load,
                              const Eigen::VectorXd& t, bool alias_risk) {
    constexpr double beta = 0.25;
    constexpr double gamma = 0.5;
    const double m = osc.mass();
    const double wn = osc.omega_n();
    const double c = 2.0 * m * osc.zeta() * wn;
    const double k = m * wn * wn;
    const Eigen::VectorXd q = load.evaluate(t);
    const Eigen::Index n = t.size();
    const double dt = t[1] - t[0];

    Eigen::VectorXd u(n), v(n), a(n);
    u[0] = 0.0;
    v[0] = 0.0;
    a[0] = q[0] / m;
    const double denom = m + gamma * dt * c + beta * dt * dt * k;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double u_pred = u[i] + dt * v[i] + (0.5 - beta) * dt * dt * a[i];
        const double v_pred = v[i] + (1.0 - gamma) * dt * a[i];
        a[i + 1] = (q[i + 1] - c * v_pred - k * u_pred) / denom;
        u[i + 1] = u_pred + beta * dt * dt * a[i + 1];
        v[i + 1] = v_pred + gamma * dt * a[i + 1];
    }
    return pack_response(t, std::move(u), std::move(v), std::move(a),
                         alias_risk);
}

} // namespace

SdofResponse sdof_response(const Oscillator& osc, const LoadSignal& load,
                           double fs, double duration, SdofMethod method) {
    if (!(fs > 0.0) || !(duration > 0.0))
        throw ValidationError("sampling rate and duration must be positive");
    const Eigen::Index n =
        std::max<Eigen::Index>(2, static_cast<Eigen::Index>(
                                      std::llround(duration * fs)));
    const Eigen::VectorXd t = uniform_grid(n, fs);
    const bool alias_risk = fs <= 2.0 * load.max_frequency();

    if (method == SdofMethod::Auto)
        method = load.is_harmonic_sum() ? SdofMethod::ExactTransient
                                        : SdofMethod::Newmark;
    switch (method) {
    case SdofMethod::Newmark:
        return newmark_response(osc, load, t, alias_risk);
    case SdofMethod::ExactTransient:
        return exact_response(osc, load, t, true, alias_risk);
    case SdofMethod::ExactSteadyState:
        return exact_response(osc, load, t, false, alias_risk);
    default:
        throw ValidationError("unresolved integration method");
    }
}

MdofResult mdof_modal_response(const ModeShapeSet& shapes,
                               const std::vector<LoadSignal>& nodal_loads,
                               double fs, double duration, SdofMethod method) {
    if (static_cast<Eigen::Index>(nodal_loads.size()) != shapes.n_sensors())
        throw ValidationError("one nodal load per sensor location required");

    bool all_harmonic = true;
    for (const auto& p : nodal_loads)
        all_harmonic = all_harmonic && p.is_harmonic_sum();

    const Eigen::Index n =
        std::max<Eigen::Index>(2, static_cast<Eigen::Index>(
                                      std::llround(duration * fs)));
    const Eigen::VectorXd t = uniform_grid(n, fs);

    // q_j = sum_s phi(s, j) p_s; combine harmonic coefficients exactly when
    // every nodal load shares the synthesis grid.
    std::vector<LoadSignal> modal_loads;
    for (Eigen::Index j = 0; j < shapes.n_modes(); ++j) {
        if (all_harmonic) {
            std::map<double, HarmonicComponent> acc;
            for (Eigen::Index s = 0; s < shapes.n_sensors(); ++s) {
                const double phi = shapes.phi()(s, j);
                for (const auto& c :
                     nodal_loads[static_cast<size_t>(s)].components()) {
                    auto& slot = acc[c.frequency];
                    slot.frequency = c.frequency;
                    slot.a += phi * c.a;
                    slot.b += phi * c.b;
                }
            }
            std::vector<HarmonicComponent> comps;
            comps.reserve(acc.size());
            for (auto& [f, c] : acc) comps.push_back(c);
            modal_loads.push_back(LoadSignal::harmonic_sum(std::move(comps)));
        } else {
            Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
            for (Eigen::Index s = 0; s < shapes.n_sensors(); ++s)
                q += shapes.phi()(s, j) *
                     nodal_loads[static_cast<size_t>(s)].evaluate(t);
            modal_loads.push_back(
                LoadSignal::sampled(TimeSeries(t, q, SignalKind::Force)));
        }
    }

    std::vector<TimeSeries> truth;
    std::vector<SdofResponse> modal;
    std::vector<TimeSeries> modal_u, modal_v, modal_a;
    for (Eigen::Index j = 0; j < shapes.n_modes(); ++j) {
        truth.emplace_back(t, modal_loads[static_cast<size_t>(j)].evaluate(t),
                           SignalKind::Force);
        SdofResponse resp = sdof_response(
            shapes.oscillator(j), modal_loads[static_cast<size_t>(j)], fs,
            duration, method);
        modal_u.push_back(resp.u);
        modal_v.push_back(resp.v);
        modal_a.push_back(resp.a);
        modal.push_back(std::move(resp));
    }
    return MdofResult{std::move(truth), std::move(modal),
                      modal_superpose(modal_u, shapes),
                      modal_superpose(modal_v, shapes),
                      modal_superpose(modal_a, shapes)};
}

const std::vector<std::vector<SignalKind>>& input_type_combinations() {
    static const std::vector<std::vector<SignalKind>> combos = {
        {SignalKind::Displacement},
        {SignalKind::Velocity},
        {SignalKind::Acceleration},
        {SignalKind::Displacement, SignalKind::Velocity},
        {SignalKind::Displacement, SignalKind::Acceleration},
        {SignalKind::Velocity, SignalKind::Acceleration},
        {SignalKind::Displacement, SignalKind::Velocity,
         SignalKind::Acceleration}};
    return combos;
}

std::string input_type_label(const std::vector<SignalKind>& kinds) {
    std::string label;
    for (SignalKind kind : kinds) {
        switch (kind) {
        case SignalKind::Displacement: label += 'u'; break;
        case SignalKind::Velocity: label += 'v'; break;
        case SignalKind::Acceleration: label += 'a'; break;
        default: label += '?'; break;
        }
    }
    return label;
}

double r_squared(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
    if (truth.size() != pred.size())
        throw ValidationError("r_squared requires equal-length vectors");
    const double mean = truth.mean();
    const double ss_total = (truth.array() - mean).square().sum();
    if (ss_total <= 0.0)
        throw ValidationError("r_squared reference has zero variance");
    return 1.0 - (truth - pred).squaredNorm() / ss_total;
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw ValidationError("quantile of empty sample");
    std::sort(xs.begin(), xs.end());
    const double h = q * static_cast<double>(xs.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(h));
    const size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = h - std::floor(h);
    return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

namespace {

struct SamplePlan {
    double dt_over_t = 0.10;
    double snr = 15.0;
    std::vector<SignalKind> kinds;
    const std::vector<std::pair<double, double>>* components = nullptr;
    const CutoffRule* rule = nullptr;
};

// One Monte Carlo repetition: synthesize, contaminate, fit, reconstruct.
std::optional<double> study_sample(const StudyConfig& cfg,
                                   const SamplePlan& plan,
                                   std::uint64_t sample_seed) {
    const Oscillator osc(cfg.mass, cfg.zeta, cfg.f_n);
    const double period = osc.natural_period();
    const double dt = plan.dt_over_t * period;
    const double fs = 1.0 / dt;
    const Eigen::Index n_t = std::max<Eigen::Index>(
        32, static_cast<Eigen::Index>(
                std::llround(cfg.duration_periods / plan.dt_over_t)));
    const double duration = static_cast<double>(n_t) * dt;

    Rng rng(derive_seed(sample_seed, "load"));
    std::vector<HarmonicComponent> comps;
    const auto& components =
        plan.components ? *plan.components : cfg.load_components;
    for (const auto& [rel_f, rel_amp] : components) {
        // Snap to the window's bin grid so the steady response is periodic.
        double f = rel_f * cfg.f_n;
        f = std::max(1.0, std::round(f * duration)) / duration;
        if (2.0 * f >= fs) continue; // unrepresentable at this rate
        comps.push_back(HarmonicComponent::from_amplitude_phase(
            rel_amp, f, rng.uniform(0.0, 2.0 * pi)));
    }
    if (comps.empty()) return std::nullopt;
    const LoadSignal load = LoadSignal::harmonic_sum(comps);
    const SdofResponse resp =
        sdof_response(osc, load, fs, duration, SdofMethod::ExactTransient);

    DatasetStack stack;
    int group = 0;
    for (SignalKind kind : plan.kinds) {
        const TimeSeries* src = nullptr;
        switch (kind) {
        case SignalKind::Displacement: src = &resp.u; break;
        case SignalKind::Velocity: src = &resp.v; break;
        case SignalKind::Acceleration: src = &resp.a; break;
        default: throw ValidationError("study kinds must be responses");
        }
        TimeSeries noisy = add_white_noise(
            *src, plan.snr,
            derive_seed(sample_seed, "noise", static_cast<std::uint64_t>(group)));
        stack.entries.push_back({detrend_mean(noisy), group});
        ++group;
    }
    stack.reference = 0;
    for (size_t i = 0; i < plan.kinds.size(); ++i)
        if (plan.kinds[i] == SignalKind::Displacement) {
            stack.reference = static_cast<Eigen::Index>(i);
            break;
        }

    try {
        const CutoffRule& rule = plan.rule ? *plan.rule : cfg.rule;
        const SpectralScales scales = select_frequencies_union(stack, rule);
        FitConfig fit_cfg;
        fit_cfg.starts = cfg.fit_starts;
        fit_cfg.seed = derive_seed(sample_seed, "fit");
        const TrainedModel model = fit(stack, scales, fit_cfg);
        const ForcePosterior post =
            predict_force(model, osc, resp.u.t(), CovMode::Diagonal);
        const Eigen::VectorXd truth = load.evaluate(resp.u.t());
        return r_squared(truth, post.mean);
    } catch (const NoFrequenciesSelected&) {
        return std::nullopt;
    } catch (const FitFailed&) {
        return std::nullopt;
    } catch (const NumericalBreakdown&) {
        return std::nullopt;
    }
}

} // namespace

std::vector<StudyRow> run_study(const StudyConfig& cfg) {
    if (cfg.samples_per_point < 1)
        throw ValidationError("samples_per_point must be at least 1");

    struct Point {
        std::string label;
        double axis_value;
        SamplePlan plan;
    };
    std::vector<Point> points;
    const std::vector<SignalKind> all_kinds{SignalKind::Displacement,
                                            SignalKind::Velocity,
                                            SignalKind::Acceleration};
    switch (cfg.axis) {
    case StudyConfig::Axis::SamplingRate:
        for (double dtt : cfg.dt_over_t)
            points.push_back({"dt/T=" + std::to_string(dtt), dtt,
                              {dtt, cfg.fixed_snr, all_kinds}});
        break;
    case StudyConfig::Axis::Snr:
        for (double snr : cfg.snr_grid)
            points.push_back({"snr=" + std::to_string(snr), snr,
                              {cfg.fixed_dt_over_t, snr, all_kinds}});
        break;
    case StudyConfig::Axis::InputType: {
        const auto& combos = input_type_combinations();
        for (size_t i = 0; i < combos.size(); ++i)
            points.push_back({input_type_label(combos[i]),
                              static_cast<double>(i),
                              {cfg.fixed_dt_over_t, cfg.fixed_snr, combos[i],
                               &cfg.input_type_components,
                               &cfg.input_type_rule}});
        break;
    }
    }
    if (points.empty()) throw ValidationError("study axis grid is empty");

    std::vector<StudyRow> rows;
    for (size_t p = 0; p < points.size(); ++p) {
        std::vector<std::optional<double>> r2(
            static_cast<size_t>(cfg.samples_per_point));
        parallel_for(
            r2.size(),
            [&](size_t i) {
                const std::uint64_t seed = derive_seed(
                    cfg.seed, "study-sample",
                    static_cast<std::uint64_t>(p) * 1000000ULL + i);
                r2[i] = study_sample(cfg, points[p].plan, seed);
            },
            cfg.threads);

        StudyRow row;
        row.label = points[p].label;
        row.axis_value = points[p].axis_value;
        std::vector<double> ok;
        for (const auto& r : r2)
            if (r)
                ok.push_back(*r);
            else
                ++row.n_failed;
        if (ok.empty())
            throw FitFailed("every sample failed at study point " + row.label);
        double sum = 0.0;
        for (double r : ok) sum += r;
        row.mean_r2 = sum / static_cast<double>(ok.size());
        row.q025 = quantile(ok, 0.025);
        row.q975 = quantile(ok, 0.975);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace loadrec::sim
