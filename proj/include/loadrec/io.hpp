// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "loadrec/gp.hpp"
#include "loadrec/time_series.hpp"

namespace loadrec::io {

/// Parsed time-indexed CSV: header row, first column `time`, remaining
/// columns one channel each.
struct ChannelSet {
    Eigen::VectorXd t;
    std::vector<std::string> names;
    std::vector<Eigen::VectorXd> channels;

    Eigen::Index n_channels() const {
        return static_cast<Eigen::Index>(channels.size());
    }
    const Eigen::VectorXd& channel(const std::string& name) const;
};

/// Reads a time CSV; errors carry the file name and offending line.
ChannelSet read_time_csv(const std::filesystem::path& path);

/// Plain numeric CSV (header + columns), e.g. a mode shape matrix with
/// rows = sensors and columns = modes.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Writes columns under a header. Values are formatted with %.15g; the file
/// is written to a temporary sibling and renamed into place.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<Eigen::VectorXd>& columns);

void write_text(const std::filesystem::path& path, const std::string& text);

/// FNV-1a digest of a series' raw time and value bytes, as fixed-width hex.
std::string series_digest(const TimeSeries& series);

/// Extra bookkeeping persisted with a model.
struct ModelInfo {
    std::vector<std::string> entry_digests;
    std::vector<double> entry_offsets; // removed means, entry order
    Eigen::Index n_total_bins = 0;     // reference spectrum size
    std::string config_digest;
};

/// Versioned JSON model container (magic string + schema integer). Holds the
/// hyperparameters, the reduced frequency grid with scales, and the cached
/// weight posterior, which is everything prediction needs.
void save_model(const std::filesystem::path& path, const TrainedModel& model,
                const ModelInfo& info);

struct LoadedModel {
    TrainedModel model;
    ModelInfo info;
};

LoadedModel load_model(const std::filesystem::path& path);

} // namespace loadrec::io
