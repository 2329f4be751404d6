// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <string>
#include <vector>

#include "loadrec/basis.hpp"
#include "loadrec/time_series.hpp"

namespace loadrec {

/// A set of simultaneously sampled channels of one response kind, e.g. all
/// accelerometers of an array. All channels share the time grid.
class SensorArray {
public:
    SensorArray(std::vector<TimeSeries> channels,
                std::vector<std::string> locations = {});

    const std::vector<TimeSeries>& channels() const { return channels_; }
    const std::vector<std::string>& locations() const { return locations_; }
    SignalKind kind() const { return channels_[0].kind(); }
    const Eigen::VectorXd& t() const { return channels_[0].t(); }
    Eigen::Index n_channels() const {
        return static_cast<Eigen::Index>(channels_.size());
    }

    /// Channels as rows: N_s x N_t.
    Eigen::MatrixXd matrix() const;

private:
    std::vector<TimeSeries> channels_;
    std::vector<std::string> locations_;
};

/// Least-squares modal decomposition u = (Phi^T Phi)^-1 Phi^T z, applied
/// column-wise over time. Requires at least as many sensors as modes. Uses a
/// QR solve when cond(Phi) exceeds 1e6 and throws DegenerateModeShapes beyond
/// 1e12. The response kind is preserved.
std::vector<TimeSeries> modal_decompose(const SensorArray& array,
                                        const ModeShapeSet& shapes);

/// Modal superposition z = Phi u.
SensorArray modal_superpose(const std::vector<TimeSeries>& modal,
                            const ModeShapeSet& shapes,
                            std::vector<std::string> locations = {});

} // namespace loadrec
