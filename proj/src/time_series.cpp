// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/time_series.hpp"

#include <cmath>
#include <utility>

namespace loadrec {

const char* to_string(SignalKind kind) {
    switch (kind) {
    case SignalKind::Displacement: return "displacement";
    case SignalKind::Velocity: return "velocity";
    case SignalKind::Acceleration: return "acceleration";
    case SignalKind::Force: return "force";
    case SignalKind::Rotation: return "rotation";
    }
    return "unknown";
}

SignalKind kind_from_string(const std::string& name) {
    if (name == "displacement") return SignalKind::Displacement;
    if (name == "velocity") return SignalKind::Velocity;
    if (name == "acceleration") return SignalKind::Acceleration;
    if (name == "force") return SignalKind::Force;
    if (name == "rotation") return SignalKind::Rotation;
    throw ValidationError("unknown signal kind '" + name + "'");
}

int derivative_order(SignalKind kind) {
    switch (kind) {
    case SignalKind::Displacement: return 0;
    case SignalKind::Velocity: return 1;
    case SignalKind::Acceleration: return 2;
    default:
        throw ValidationError(std::string("signal kind '") + to_string(kind) +
                              "' is not a response quantity");
    }
}

TimeSeries::TimeSeries(Eigen::VectorXd t, Eigen::VectorXd values,
                       SignalKind kind, std::string unit)
    : t_(std::move(t)), values_(std::move(values)), kind_(kind),
      unit_(std::move(unit)) {
    if (t_.size() < 2)
        throw ValidationError("time series needs at least 2 samples");
    if (t_.size() != values_.size())
        throw ValidationError("time and value vectors differ in length");
    for (Eigen::Index i = 0; i + 1 < t_.size(); ++i)
        if (!(t_[i + 1] > t_[i]))
            throw ValidationError("time stamps must be strictly increasing");
    if (!values_.allFinite() || !t_.allFinite())
        throw ValidationError("time series contains non-finite values");
}

std::optional<double> TimeSeries::uniform_dt() const {
    const Eigen::Index n = t_.size();
    const double dt = (t_[n - 1] - t_[0]) / static_cast<double>(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (std::abs((t_[i + 1] - t_[i]) - dt) > 1e-9 * dt)
            return std::nullopt;
    return dt;
}

double TimeSeries::require_uniform_dt() const {
    auto dt = uniform_dt();
    if (!dt) throw NonUniformSampling("time series is not uniformly sampled");
    return *dt;
}

Eigen::VectorXd uniform_grid(Eigen::Index n, double fs, double t0) {
    Eigen::VectorXd t(n);
    const double dt = 1.0 / fs;
    for (Eigen::Index i = 0; i < n; ++i)
        t[i] = t0 + static_cast<double>(i) * dt;
    return t;
}

} // namespace loadrec
