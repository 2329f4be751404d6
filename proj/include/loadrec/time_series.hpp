// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

#include "loadrec/errors.hpp"

namespace loadrec {

enum class SignalKind { Displacement, Velocity, Acceleration, Force, Rotation };

const char* to_string(SignalKind kind);
SignalKind kind_from_string(const std::string& name);

/// Time-derivative order of a response kind relative to displacement.
/// Throws ValidationError for non-response kinds (Force, Rotation).
int derivative_order(SignalKind kind);

/// Immutable sampled signal. Time stamps must be strictly increasing and all
/// values finite; both are checked at construction.
class TimeSeries {
public:
    TimeSeries(Eigen::VectorXd t, Eigen::VectorXd values, SignalKind kind,
               std::string unit = "");

    const Eigen::VectorXd& t() const { return t_; }
    const Eigen::VectorXd& values() const { return values_; }
    SignalKind kind() const { return kind_; }
    const std::string& unit() const { return unit_; }

    Eigen::Index size() const { return t_.size(); }
    double duration() const { return t_[t_.size() - 1] - t_[0]; }

    /// Returns the sampling interval when the grid is uniform, i.e. when the
    /// largest deviation between successive differences is below 1e-9 * dt.
    std::optional<double> uniform_dt() const;

    /// As uniform_dt(), but throws NonUniformSampling when the grid is not uniform.
    double require_uniform_dt() const;

    /// Sampling rate 1/dt; requires a uniform grid.
    double sampling_rate() const { return 1.0 / require_uniform_dt(); }

    /// Copy with the same grid and metadata but different values.
    TimeSeries with_values(Eigen::VectorXd values) const {
        return TimeSeries(t_, std::move(values), kind_, unit_);
    }

    TimeSeries with_kind(SignalKind kind, std::string unit = "") const {
        return TimeSeries(t_, values_, kind, std::move(unit));
    }

private:
    Eigen::VectorXd t_;
    Eigen::VectorXd values_;
    SignalKind kind_;
    std::string unit_;
};

/// One-sided magnitude spectrum. f[0] = 0 and bins are spaced fs / N_t.
struct Spectrum {
    Eigen::VectorXd f;
    Eigen::VectorXd magnitude;
};

/// Continuous wavelet transform on a frequency x time grid.
///
/// cone_of_influence holds, per time instant, the smallest frequency whose
/// coefficients are unaffected by edge artifacts: a coefficient at (f, t) is
/// reliable iff f >= cone_of_influence[t]. The boundary follows the sqrt(2)*s
/// e-folding radius of the Morlet envelope at scale s.
struct WaveletGrid {
    Eigen::VectorXd f;
    Eigen::VectorXd t;
    Eigen::MatrixXcd coefficients; // rows: frequencies, cols: time instants
    double f0 = 0.0;
    Eigen::VectorXd cone_of_influence;

    bool inside_cone(Eigen::Index fi, Eigen::Index ti) const {
        return f[fi] >= cone_of_influence[ti];
    }
};

/// Uniform grid helper: n samples at rate fs starting at t0.
Eigen::VectorXd uniform_grid(Eigen::Index n, double fs, double t0 = 0.0);

} // namespace loadrec
