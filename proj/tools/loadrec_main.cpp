// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

// loadrec command line: fit / predict / study / metrics / decompose /
// simulate. One command per process; every output file is written via a
// temporary sibling and an atomic rename. All randomness flows from the
// config's master seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "loadrec/gp.hpp"
#include "loadrec/io.hpp"
#include "loadrec/metrics.hpp"
#include "loadrec/modal.hpp"
#include "loadrec/rng.hpp"
#include "loadrec/signal.hpp"
#include "loadrec/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace loadrec;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config file '" + path.string() + "'");
    try {
        json j;
        in >> j;
        return j;
    } catch (const std::exception& e) {
        throw ValidationError("config file '" + path.string() +
                              "' is not valid JSON: " + e.what());
    }
}

std::string json_digest(const json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : dump) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

CutoffRule rule_from_json(const json& j) {
    const std::string type = j.value("type", "sigma");
    if (type == "sigma") return CutoffRule::mean_sigma(j.value("c", 2.0));
    if (type == "band")
        return CutoffRule::band(j.at("f_min").get<double>(),
                                j.at("f_max").get<double>());
    throw ValidationError("frequency_rule.type must be 'sigma' or 'band'");
}

Oscillator oscillator_from_json(const json& j) {
    return Oscillator(j.at("mass").get<double>(), j.at("zeta").get<double>(),
                      j.at("f_n").get<double>());
}

struct LoadedInputs {
    DatasetStack stack;
    std::vector<double> offsets;
    std::vector<std::string> digests;
};

// Reads every channel of every configured file into stack entries. The
// reference selector (file index, channel index) resolves to a flat entry.
LoadedInputs load_inputs(const json& cfg, const fs::path& base_dir) {
    if (!cfg.contains("inputs") || cfg["inputs"].empty())
        throw ValidationError("config has no inputs");
    const bool detrend = cfg.value("detrend", true);

    LoadedInputs loaded;
    std::vector<Eigen::Index> file_first_entry;
    for (const auto& input : cfg["inputs"]) {
        fs::path file = input.at("file").get<std::string>();
        if (file.is_relative()) file = base_dir / file;
        const io::ChannelSet channels = io::read_time_csv(file);
        const SignalKind kind =
            kind_from_string(input.at("kind").get<std::string>());
        const std::string unit = input.value("unit", "");
        const int group = input.value(
            "noise_group", static_cast<int>(file_first_entry.size()));
        std::vector<Eigen::Index> selected;
        if (input.contains("channels")) {
            for (const auto& name : input["channels"]) {
                const std::string wanted = name.get<std::string>();
                bool found = false;
                for (size_t c = 0; c < channels.names.size(); ++c)
                    if (channels.names[c] == wanted) {
                        selected.push_back(static_cast<Eigen::Index>(c));
                        found = true;
                    }
                if (!found)
                    throw ValidationError("file '" + file.string() +
                                          "' has no channel '" + wanted + "'");
            }
        } else {
            for (Eigen::Index c = 0; c < channels.n_channels(); ++c)
                selected.push_back(c);
        }
        file_first_entry.push_back(
            static_cast<Eigen::Index>(loaded.stack.entries.size()));
        for (Eigen::Index c : selected) {
            TimeSeries series(channels.t,
                              channels.channels[static_cast<size_t>(c)], kind,
                              unit);
            loaded.digests.push_back(io::series_digest(series));
            double offset = 0.0;
            if (detrend) series = detrend_mean(series, &offset);
            loaded.offsets.push_back(offset);
            loaded.stack.entries.push_back({std::move(series), group});
        }
    }

    Eigen::Index ref_file = 0, ref_channel = 0;
    if (cfg.contains("reference")) {
        ref_file = cfg["reference"].value("file", 0);
        ref_channel = cfg["reference"].value("channel", 0);
    }
    if (ref_file < 0 ||
        ref_file >= static_cast<Eigen::Index>(file_first_entry.size()))
        throw ValidationError("reference.file index out of range");
    loaded.stack.reference =
        file_first_entry[static_cast<size_t>(ref_file)] + ref_channel;
    if (loaded.stack.reference < 0 ||
        loaded.stack.reference >=
            static_cast<Eigen::Index>(loaded.stack.entries.size()))
        throw ValidationError("reference.channel index out of range");
    loaded.stack.validate();
    return loaded;
}

int cmd_fit(const fs::path& config_path, const std::string& out_override,
            const std::string& band_override, double cutoff_override) {
    const json cfg = load_json(config_path);
    const fs::path base_dir = config_path.parent_path();
    LoadedInputs loaded = load_inputs(cfg, base_dir);

    CutoffRule rule = cfg.contains("frequency_rule")
                          ? rule_from_json(cfg["frequency_rule"])
                          : CutoffRule::mean_sigma(2.0);
    if (!band_override.empty()) {
        const auto colon = band_override.find(':');
        if (colon == std::string::npos)
            throw ValidationError("--band expects f_min:f_max");
        rule = CutoffRule::band(std::stod(band_override.substr(0, colon)),
                                std::stod(band_override.substr(colon + 1)));
    } else if (cutoff_override > 0.0) {
        rule = CutoffRule::mean_sigma(cutoff_override);
    }

    const std::string selection = cfg.value("selection", "union");
    const auto& ref_entry = loaded.stack.reference_entry();
    const Spectrum ref_spectrum = fft_magnitude(ref_entry.series);
    SpectralScales scales;
    if (selection == "union") {
        scales = select_frequencies_union(loaded.stack, rule);
    } else if (selection == "reference") {
        scales = to_displacement_scales(select_frequencies(ref_spectrum, rule),
                                        ref_entry.series.kind());
    } else {
        throw ValidationError("selection must be 'union' or 'reference'");
    }

    FitConfig fit_cfg;
    if (cfg.contains("optimizer")) {
        const auto& opt = cfg["optimizer"];
        fit_cfg.starts = opt.value("starts", 4);
        fit_cfg.tol = opt.value("tol", 1e-6);
        fit_cfg.max_iterations = opt.value("max_iterations", 0);
    }
    fit_cfg.seed = cfg.value("seed", std::uint64_t{0});

    const TrainedModel model = fit(loaded.stack, scales, fit_cfg);

    io::ModelInfo info;
    info.entry_digests = loaded.digests;
    info.entry_offsets = loaded.offsets;
    info.n_total_bins = ref_spectrum.f.size();
    info.config_digest = json_digest(cfg);

    const fs::path out =
        out_override.empty()
            ? base_dir / cfg.value("output_model", std::string("model.json"))
            : fs::path(out_override);
    io::save_model(out, model, info);

    const double eliminated =
        100.0 * (1.0 - static_cast<double>(scales.size()) /
                           static_cast<double>(ref_spectrum.f.size()));
    std::printf("log marginal likelihood: %.6f\n", model.log_marginal);
    for (int g = 0; g < loaded.stack.n_groups(); ++g)
        std::printf("noise group %d: sigma_n2 = %.6g, r_sigma = %.6f\n", g,
                    model.theta.sigma_n2[g], model.r_sigma(g));
    std::printf("sigma_s2 = %.6g\n", model.theta.sigma_s2);
    std::printf("frequencies kept: %ld of %ld bins (%.1f%% eliminated)\n",
                static_cast<long>(scales.size()),
                static_cast<long>(ref_spectrum.f.size()), eliminated);
    for (Eigen::Index j = 0; j < scales.size(); ++j)
        std::printf("  f_r[%ld] = %.6g Hz (lambda = %.6g)\n",
                    static_cast<long>(j), scales.f[j], scales.lambda[j]);
    std::printf("model written: %s\n", out.string().c_str());
    return 0;
}

int cmd_predict(const std::string& model_path, double mass, double zeta,
                double f_n, double t0, double t1, long n_pred, double dt,
                const std::string& grid_from, const std::string& cov_mode,
                const std::string& out_path) {
    const io::LoadedModel loaded = io::load_model(model_path);
    const TrainedModel& model = loaded.model;
    const Oscillator osc(mass, zeta, f_n);

    Eigen::VectorXd t;
    if (!grid_from.empty()) {
        t = io::read_time_csv(grid_from).t;
    } else {
        const double lo = std::isnan(t0) ? model.train_t0 : t0;
        const double hi = std::isnan(t1) ? model.train_t1 : t1;
        if (!(hi > lo)) throw ValidationError("prediction span is empty");
        if (dt > 0.0) {
            const long n = static_cast<long>(std::floor((hi - lo) / dt)) + 1;
            t.resize(n);
            for (long i = 0; i < n; ++i)
                t[i] = lo + static_cast<double>(i) * dt;
        } else {
            t = Eigen::VectorXd::LinSpaced(n_pred > 1 ? n_pred : 1000, lo, hi);
        }
    }

    CovMode mode = CovMode::Full;
    if (cov_mode == "diag") mode = CovMode::Diagonal;
    else if (cov_mode == "full") mode = CovMode::Full;
    else if (cov_mode == "auto")
        mode = t.size() > 5000 ? CovMode::Diagonal : CovMode::Full;
    else throw ValidationError("--cov must be full, diag or auto");

    const ForcePosterior post = predict_force(model, osc, t, mode);
    const Eigen::VectorXd std_dev = post.variance.cwiseSqrt();
    io::write_csv(out_path, {"time", "mean", "std"},
                  {post.t, post.mean, std_dev});
    std::printf("force prediction written: %s (%ld rows, %s covariance)\n",
                out_path.c_str(), static_cast<long>(t.size()),
                mode == CovMode::Full ? "full" : "diagonal");
    if (post.clipped_negative > 0)
        std::printf("warning: clipped %d negative posterior variances\n",
                    post.clipped_negative);
    return 0;
}

sim::StudyConfig study_config_from_json(const json& cfg) {
    sim::StudyConfig sc;
    const std::string axis = cfg.value("axis", "sampling-rate");
    if (axis == "sampling-rate")
        sc.axis = sim::StudyConfig::Axis::SamplingRate;
    else if (axis == "snr")
        sc.axis = sim::StudyConfig::Axis::Snr;
    else if (axis == "input-type")
        sc.axis = sim::StudyConfig::Axis::InputType;
    else
        throw ValidationError(
            "study axis must be sampling-rate, snr or input-type");

    if (cfg.contains("dt_over_t"))
        sc.dt_over_t = cfg["dt_over_t"].get<std::vector<double>>();
    if (cfg.contains("snr")) sc.snr_grid = cfg["snr"].get<std::vector<double>>();
    sc.samples_per_point = cfg.value("samples", 100);
    sc.seed = cfg.value("seed", std::uint64_t{0});
    if (cfg.contains("oscillator")) {
        sc.mass = cfg["oscillator"].value("mass", 1.0);
        sc.zeta = cfg["oscillator"].value("zeta", 0.02);
        sc.f_n = cfg["oscillator"].value("f_n", 1.0);
    }
    sc.fixed_snr = cfg.value("fixed_snr", 15.0);
    sc.fixed_dt_over_t = cfg.value("fixed_dt_over_t", 0.10);
    sc.duration_periods = cfg.value("duration_periods", 40.0);
    if (cfg.contains("load_components")) {
        sc.load_components.clear();
        for (const auto& c : cfg["load_components"])
            sc.load_components.emplace_back(c.at(0).get<double>(),
                                            c.at(1).get<double>());
    }
    if (cfg.contains("rule")) sc.rule = rule_from_json(cfg["rule"]);
    if (cfg.contains("input_type_components")) {
        sc.input_type_components.clear();
        for (const auto& c : cfg["input_type_components"])
            sc.input_type_components.emplace_back(c.at(0).get<double>(),
                                                  c.at(1).get<double>());
    }
    if (cfg.contains("input_type_rule"))
        sc.input_type_rule = rule_from_json(cfg["input_type_rule"]);
    sc.fit_starts = cfg.value("fit_starts", 2);
    sc.threads = cfg.value("threads", 0);
    return sc;
}

int cmd_study(const fs::path& config_path, const std::string& out_prefix) {
    const json cfg = load_json(config_path);
    const sim::StudyConfig sc = study_config_from_json(cfg);
    const auto rows = sim::run_study(sc);

    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Eigen::VectorXd axis(n), mean(n), q025(n), q975(n), failed(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<size_t>(i)];
        axis[i] = row.axis_value;
        mean[i] = row.mean_r2;
        q025[i] = row.q025;
        q975[i] = row.q975;
        failed[i] = row.n_failed;
    }
    io::write_csv(out_prefix + ".csv",
                  {"axis", "mean_r2", "q025", "q975", "n_failed"},
                  {axis, mean, q025, q975, failed});

    json meta;
    meta["config"] = cfg;
    meta["config_digest"] = json_digest(cfg);
    meta["seed"] = sc.seed;
    json labels = json::array();
    for (const auto& row : rows) labels.push_back(row.label);
    meta["labels"] = labels;
    io::write_text(out_prefix + ".meta.json", meta.dump(2) + "\n");

    for (const auto& row : rows)
        std::printf("%-12s mean R2 = %.4f  [%.4f, %.4f]  failed %d\n",
                    row.label.c_str(), row.mean_r2, row.q025, row.q975,
                    row.n_failed);
    std::printf("study written: %s.csv\n", out_prefix.c_str());
    return 0;
}

int cmd_metrics(const std::string& ref_path, const std::string& cand_path,
                const std::string& ref_column, const std::string& cand_column,
                double lambda, double t_c, double f0,
                const std::string& out_path) {
    const io::ChannelSet ref = io::read_time_csv(ref_path);
    const io::ChannelSet cand = io::read_time_csv(cand_path);
    const Eigen::VectorXd& xv =
        ref_column.empty() ? ref.channels[0] : ref.channel(ref_column);
    const Eigen::VectorXd& yv =
        cand_column.empty() ? cand.channels[0] : cand.channel(cand_column);
    const TimeSeries x(ref.t, xv, SignalKind::Force);
    const TimeSeries y(cand.t, yv, SignalKind::Force);

    metrics::MetricConfig cfg;
    if (lambda > 0.0)
        cfg.lambda_rms = cfg.lambda_c = cfg.lambda_phi = cfg.lambda_peak =
            cfg.lambda_m = cfg.lambda_w = lambda;
    if (t_c > 0.0) cfg.t_c = t_c;
    if (f0 > 0.0) cfg.wavelet_f0 = f0;

    const metrics::MetricReport report = metrics::compare(x, y, cfg);
    json j;
    j["m_rms"] = report.m_rms;
    j["m_c"] = report.m_c;
    j["m_phi"] = report.m_phi;
    j["m_peak"] = report.m_peak;
    j["m_m"] = report.m_m;
    j["m_w"] = report.m_w;
    j["m_r2"] = report.m_r2;
    j["wavelet_skipped_rows"] = report.wavelet_skipped_rows;
    j["issues"] = report.issues;
    j["config"] = {{"lambda_rms", cfg.lambda_rms},
                   {"lambda_c", cfg.lambda_c},
                   {"lambda_phi", cfg.lambda_phi},
                   {"lambda_peak", cfg.lambda_peak},
                   {"lambda_m", cfg.lambda_m},
                   {"lambda_w", cfg.lambda_w},
                   {"t_c", cfg.t_c > 0.0 ? cfg.t_c : 0.1 * x.duration()},
                   {"wavelet_f0", cfg.wavelet_f0},
                   {"dtw_radius", cfg.dtw_radius}};
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        io::write_text(out_path, text);
        std::printf("metric report written: %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_decompose(const std::string& input_path,
                  const std::string& shapes_path, const std::string& kind_name,
                  const std::string& out_path) {
    const io::ChannelSet sensors = io::read_time_csv(input_path);
    const Eigen::MatrixXd phi = io::read_matrix_csv(shapes_path);
    if (phi.rows() != sensors.n_channels())
        throw ValidationError(
            "mode shape rows (" + std::to_string(phi.rows()) +
            ") do not match sensor channels (" +
            std::to_string(sensors.n_channels()) + ")");
    const SignalKind kind = kind_from_string(kind_name);
    std::vector<TimeSeries> channels;
    for (Eigen::Index s = 0; s < sensors.n_channels(); ++s)
        channels.emplace_back(sensors.t,
                              sensors.channels[static_cast<size_t>(s)], kind);
    const SensorArray array(std::move(channels), sensors.names);

    // Placeholder modal parameters: decomposition needs only the shapes.
    const Eigen::Index nm = phi.cols();
    const ModeShapeSet shapes(
        phi, Eigen::VectorXd::Ones(nm), Eigen::VectorXd::Constant(nm, 0.01),
        Eigen::VectorXd::LinSpaced(nm, 1.0, 1.0 + static_cast<double>(nm)));
    const auto modal = modal_decompose(array, shapes);

    std::vector<std::string> header{"time"};
    std::vector<Eigen::VectorXd> columns{array.t()};
    for (Eigen::Index m = 0; m < nm; ++m) {
        header.push_back("mode" + std::to_string(m + 1));
        columns.push_back(modal[static_cast<size_t>(m)].values());
    }
    io::write_csv(out_path, header, columns);
    std::printf("modal series written: %s (%ld modes)\n", out_path.c_str(),
                static_cast<long>(nm));
    return 0;
}

int cmd_simulate(const fs::path& config_path, const std::string& out_dir) {
    const json cfg = load_json(config_path);
    const fs::path dir = out_dir;
    fs::create_directories(dir);
    const std::string type = cfg.value("type", "sdof");
    const double fs_rate = cfg.value("fs", 20.0);
    const double duration = cfg.value("duration", 40.0);
    const std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    const double snr = cfg.value("snr", 0.0);

    auto contaminate = [&](const TimeSeries& s, std::uint64_t stream) {
        return snr > 0.0
                   ? add_white_noise(s, snr, derive_seed(seed, "noise", stream))
                   : s;
    };
    auto write_series = [&](const fs::path& name,
                            const std::vector<const TimeSeries*>& list,
                            const std::vector<std::string>& names) {
        std::vector<std::string> header{"time"};
        std::vector<Eigen::VectorXd> columns{list[0]->t()};
        for (size_t i = 0; i < list.size(); ++i) {
            header.push_back(names[i]);
            columns.push_back(list[i]->values());
        }
        io::write_csv(dir / name, header, columns);
    };

    if (type == "sdof") {
        const Oscillator osc = oscillator_from_json(cfg.at("oscillator"));
        std::vector<sim::HarmonicComponent> comps;
        for (const auto& c : cfg.at("load").at("components"))
            comps.push_back(sim::HarmonicComponent::from_amplitude_phase(
                c.at(0).get<double>(), c.at(1).get<double>(),
                c.size() > 2 ? c.at(2).get<double>() : 0.0));
        const sim::LoadSignal load = sim::LoadSignal::harmonic_sum(comps);
        const auto resp = sim::sdof_response(osc, load, fs_rate, duration);
        if (resp.alias_risk)
            std::fprintf(stderr,
                         "warning: sampling rate is at or below twice the "
                         "maximum load frequency (alias risk)\n");
        const TimeSeries u = contaminate(resp.u, 0);
        const TimeSeries v = contaminate(resp.v, 1);
        const TimeSeries a = contaminate(resp.a, 2);
        write_series("resp_u.csv", {&u}, {"u"});
        write_series("resp_v.csv", {&v}, {"v"});
        write_series("resp_a.csv", {&a}, {"a"});
        const TimeSeries truth(resp.u.t(), load.evaluate(resp.u.t()),
                               SignalKind::Force);
        write_series("force_true.csv", {&truth}, {"q"});
        std::printf("sdof fixture written to %s\n", dir.string().c_str());
        return 0;
    }

    if (type == "mdof-cantilever") {
        const Eigen::Index n_sensors = cfg.value("n_sensors", 10);
        const Eigen::Index n_modes = cfg.value("n_modes", 6);
        const double f1 = cfg.value("f1", 0.1);
        const double zeta = cfg.value("zeta", 0.015);
        const json shape_cfg = cfg.value("broadband", json::object());
        sim::BroadbandShape shape;
        shape.corner_frequency = shape_cfg.value("corner_frequency", 0.05);
        shape.floor = shape_cfg.value("floor", 1e-3);
        shape.f_max = shape_cfg.value("f_max", 0.475 * fs_rate);
        shape.rms = shape_cfg.value("rms", 1.0);

        static const double beta_l[] = {1.8751040687119611, 4.6940911329741746,
                                        7.8547574382376126, 10.995540734875467,
                                        14.137168391046106, 17.278759657399481};
        if (n_modes > 6)
            throw ValidationError("mdof-cantilever supports up to 6 modes");
        Eigen::MatrixXd phi(n_sensors, n_modes);
        Eigen::VectorXd f_ns(n_modes);
        for (Eigen::Index j = 0; j < n_modes; ++j) {
            const double bl = beta_l[j];
            const double sig = (std::sinh(bl) - std::sin(bl)) /
                               (std::cosh(bl) + std::cos(bl));
            for (Eigen::Index s = 0; s < n_sensors; ++s) {
                const double xx = static_cast<double>(s + 1) /
                                  static_cast<double>(n_sensors);
                phi(s, j) = (std::cosh(bl * xx) - std::cos(bl * xx)) -
                            sig * (std::sinh(bl * xx) - std::sin(bl * xx));
            }
            f_ns[j] = f1 * (bl * bl) / (beta_l[0] * beta_l[0]);
        }
        const ModeShapeSet shapes(phi, Eigen::VectorXd::Ones(n_modes),
                                  Eigen::VectorXd::Constant(n_modes, zeta),
                                  f_ns);

        std::vector<sim::LoadSignal> loads;
        for (Eigen::Index s = 0; s < n_sensors; ++s)
            loads.push_back(sim::broadband_load(
                shape, duration,
                derive_seed(seed, "nodal-load",
                            static_cast<std::uint64_t>(s))));
        const auto result =
            sim::mdof_modal_response(shapes, loads, fs_rate, duration);

        auto write_sensors = [&](const SensorArray& sensor_array,
                                 const std::string& name, std::uint64_t base) {
            std::vector<TimeSeries> noisy;
            std::vector<std::string> names;
            for (Eigen::Index s = 0; s < sensor_array.n_channels(); ++s) {
                noisy.push_back(contaminate(
                    sensor_array.channels()[static_cast<size_t>(s)],
                    base * 100 + static_cast<std::uint64_t>(s)));
                names.push_back("s" + std::to_string(s + 1));
            }
            std::vector<const TimeSeries*> ptrs;
            for (const auto& series : noisy) ptrs.push_back(&series);
            write_series(name, ptrs, names);
        };
        write_sensors(result.sensors_u, "sensors_u.csv", 1);
        write_sensors(result.sensors_v, "sensors_v.csv", 2);
        write_sensors(result.sensors_a, "sensors_a.csv", 3);

        {
            std::vector<const TimeSeries*> ptrs;
            std::vector<std::string> names;
            for (Eigen::Index m = 0; m < n_modes; ++m) {
                ptrs.push_back(
                    &result.modal_load_truth[static_cast<size_t>(m)]);
                names.push_back("mode" + std::to_string(m + 1));
            }
            write_series("force_true.csv", ptrs, names);
        }
        {
            std::vector<std::string> header;
            std::vector<Eigen::VectorXd> columns;
            for (Eigen::Index j = 0; j < n_modes; ++j) {
                header.push_back("mode" + std::to_string(j + 1));
                columns.push_back(shapes.phi().col(j));
            }
            io::write_csv(dir / "shapes.csv", header, columns);
        }
        json params;
        params["masses"] = std::vector<double>(static_cast<size_t>(n_modes), 1.0);
        params["zetas"] = std::vector<double>(static_cast<size_t>(n_modes), zeta);
        json freq = json::array();
        for (Eigen::Index j = 0; j < n_modes; ++j) freq.push_back(f_ns[j]);
        params["f_ns"] = freq;
        io::write_text(dir / "modal_params.json", params.dump(2) + "\n");
        std::printf("mdof fixture written to %s\n", dir.string().c_str());
        return 0;
    }
    throw ValidationError("simulate type must be 'sdof' or 'mdof-cantilever'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"loadrec: dynamic modal load reconstruction from measured "
                 "structural responses"};
    app.require_subcommand(1);

    auto* fit_cmd = app.add_subcommand(
        "fit", "Train a response model from configured input channels");
    std::string fit_config, fit_out, fit_band;
    double fit_cutoff = 0.0;
    fit_cmd->add_option("--config", fit_config, "Run config JSON")->required();
    fit_cmd->add_option("--out", fit_out, "Model output path");
    fit_cmd->add_option("--band", fit_band,
                        "Frequency band rule f_min:f_max (overrides config)");
    fit_cmd->add_option("--cutoff", fit_cutoff,
                        "Mean+c*std cutoff factor (overrides config)");

    auto* predict_cmd = app.add_subcommand(
        "predict", "Reconstruct the modal load from a trained model");
    std::string model_path, grid_from, cov_mode = "auto",
                             predict_out = "force.csv";
    double mass = 0.0, zeta = 0.0, f_n = 0.0;
    double t0 = std::nan(""), t1 = std::nan(""), pred_dt = 0.0;
    long n_pred = 0;
    predict_cmd->add_option("--model", model_path, "Model JSON")->required();
    predict_cmd->add_option("--mass", mass, "Modal mass")->required();
    predict_cmd->add_option("--zeta", zeta, "Damping ratio")->required();
    predict_cmd->add_option("--fn", f_n, "Natural frequency, Hz")->required();
    predict_cmd->add_option("--t0", t0, "Prediction start, s");
    predict_cmd->add_option("--t1", t1, "Prediction end, s");
    predict_cmd->add_option("--n", n_pred, "Number of prediction instants");
    predict_cmd->add_option("--dt", pred_dt, "Prediction step, s");
    predict_cmd->add_option("--grid-from", grid_from,
                            "Take the prediction grid from a CSV time column");
    predict_cmd->add_option("--cov", cov_mode,
                            "Covariance mode: full, diag or auto (default)");
    predict_cmd->add_option("--out", predict_out, "Output CSV");

    auto* study_cmd =
        app.add_subcommand("study", "Monte Carlo reconstruction-accuracy study");
    std::string study_config, study_prefix = "study";
    study_cmd->add_option("--config", study_config, "Study config JSON")
        ->required();
    study_cmd->add_option("--out-prefix", study_prefix,
                          "Prefix for .csv and .meta.json outputs");

    auto* metrics_cmd = app.add_subcommand(
        "metrics", "Compare a candidate signal against a reference");
    std::string ref_path, cand_path, ref_column, cand_column, metrics_out;
    double lambda = 0.0, t_c = 0.0, f0 = 0.0;
    metrics_cmd->add_option("reference", ref_path, "Reference CSV")->required();
    metrics_cmd->add_option("candidate", cand_path, "Candidate CSV")
        ->required();
    metrics_cmd->add_option("--ref-column", ref_column,
                            "Reference column name");
    metrics_cmd->add_option("--cand-column", cand_column,
                            "Candidate column name");
    metrics_cmd->add_option("--lambda", lambda, "Sensitivity for all metrics");
    metrics_cmd->add_option("--tc", t_c, "Phase normalisation delay, s");
    metrics_cmd->add_option("--f0", f0, "Morlet central frequency, Hz");
    metrics_cmd->add_option("--out", metrics_out,
                            "Report JSON path (default stdout)");

    auto* decompose_cmd = app.add_subcommand(
        "decompose", "Least-squares modal decomposition of sensor channels");
    std::string sensors_path, shapes_path, kind_name = "acceleration",
                              decompose_out = "modal.csv";
    decompose_cmd->add_option("input", sensors_path, "Sensor CSV")->required();
    decompose_cmd
        ->add_option("--shapes", shapes_path,
                     "Mode shape CSV (rows sensors, columns modes)")
        ->required();
    decompose_cmd->add_option("--kind", kind_name, "Response kind label");
    decompose_cmd->add_option("--out", decompose_out, "Output CSV");

    auto* simulate_cmd = app.add_subcommand(
        "simulate", "Generate ground-truth fixtures (responses + true loads)");
    std::string sim_config, sim_out_dir = ".";
    simulate_cmd->add_option("--config", sim_config, "Simulation config JSON")
        ->required();
    simulate_cmd->add_option("--out-dir", sim_out_dir, "Output directory");

    try {
        app.parse(argc, argv);
        if (*fit_cmd) return cmd_fit(fit_config, fit_out, fit_band, fit_cutoff);
        if (*predict_cmd)
            return cmd_predict(model_path, mass, zeta, f_n, t0, t1, n_pred,
                               pred_dt, grid_from, cov_mode, predict_out);
        if (*study_cmd) return cmd_study(study_config, study_prefix);
        if (*metrics_cmd)
            return cmd_metrics(ref_path, cand_path, ref_column, cand_column,
                               lambda, t_c, f0, metrics_out);
        if (*decompose_cmd)
            return cmd_decompose(sensors_path, shapes_path, kind_name,
                                 decompose_out);
        if (*simulate_cmd) return cmd_simulate(sim_config, sim_out_dir);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
}
