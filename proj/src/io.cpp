// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/io.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace loadrec::io {

namespace {

using nlohmann::json;

constexpr const char* kModelMagic = "loadrec-model";
constexpr int kModelSchema = 1;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // Trim surrounding whitespace.
        const auto begin = field.find_first_not_of(" \t\r");
        const auto end = field.find_last_not_of(" \t\r");
        fields.push_back(begin == std::string::npos
                             ? std::string()
                             : field.substr(begin, end - begin + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, const std::filesystem::path& path,
                    size_t line_no) {
    try {
        size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                              ": cannot parse number '" + text + "'");
    }
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

RawTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open file '" + path.string() + "'");
    RawTable table;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto fields = split_csv_line(line);
        if (table.header.empty()) {
            table.header = fields;
            continue;
        }
        if (fields.size() != table.header.size())
            throw ValidationError(path.string() + ":" +
                                  std::to_string(line_no) +
                                  ": expected " +
                                  std::to_string(table.header.size()) +
                                  " fields, found " +
                                  std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields)
            row.push_back(parse_double(f, path, line_no));
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty())
        throw ValidationError("file '" + path.string() + "' has no header row");
    return table;
}

std::string format_g15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (size_t i = 0; i < arr.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

} // namespace

const Eigen::VectorXd& ChannelSet::channel(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return channels[i];
    throw ValidationError("no channel named '" + name + "'");
}

ChannelSet read_time_csv(const std::filesystem::path& path) {
    const RawTable table = read_table(path);
    if (table.header[0] != "time")
        throw ValidationError("file '" + path.string() +
                              "': first column must be named 'time', found '" +
                              table.header[0] + "'");
    if (table.header.size() < 2)
        throw ValidationError("file '" + path.string() +
                              "' has no data columns besides time");
    if (table.rows.size() < 2)
        throw ValidationError("file '" + path.string() +
                              "' needs at least 2 data rows");
    ChannelSet set;
    const Eigen::Index n = static_cast<Eigen::Index>(table.rows.size());
    set.t.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        set.t[i] = table.rows[static_cast<size_t>(i)][0];
    for (size_t c = 1; c < table.header.size(); ++c) {
        Eigen::VectorXd col(n);
        for (Eigen::Index i = 0; i < n; ++i)
            col[i] = table.rows[static_cast<size_t>(i)][c];
        set.names.push_back(table.header[c]);
        set.channels.push_back(std::move(col));
    }
    return set;
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    const RawTable table = read_table(path);
    const Eigen::Index rows = static_cast<Eigen::Index>(table.rows.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(table.header.size());
    if (rows == 0)
        throw ValidationError("file '" + path.string() + "' has no data rows");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = table.rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return m;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw ValidationError("cannot write file '" + tmp.string() + "'");
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<Eigen::VectorXd>& columns) {
    if (header.size() != columns.size())
        throw ValidationError("csv header and column counts differ");
    if (columns.empty()) throw ValidationError("csv needs at least one column");
    const Eigen::Index n = columns[0].size();
    for (const auto& col : columns)
        if (col.size() != n)
            throw ValidationError("csv columns differ in length");

    std::string text;
    for (size_t c = 0; c < header.size(); ++c) {
        if (c) text += ',';
        text += header[c];
    }
    text += '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
        for (size_t c = 0; c < columns.size(); ++c) {
            if (c) text += ',';
            text += format_g15(columns[c][i]);
        }
        text += '\n';
    }
    write_text(path, text);
}

std::string series_digest(const TimeSeries& series) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const Eigen::VectorXd& v) {
        const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
        const size_t n = static_cast<size_t>(v.size()) * sizeof(double);
        for (size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    };
    mix(series.t());
    mix(series.values());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

void save_model(const std::filesystem::path& path, const TrainedModel& model,
                const ModelInfo& info) {
    json j;
    j["magic"] = kModelMagic;
    j["schema_version"] = kModelSchema;
    j["theta"]["sigma_s2"] = model.theta.sigma_s2;
    j["theta"]["sigma_n2"] = vector_to_json(model.theta.sigma_n2);
    j["scales"]["f"] = vector_to_json(model.scales.f);
    j["scales"]["lambda"] = vector_to_json(model.scales.lambda);
    j["log_marginal"] = model.log_marginal;
    j["jitter"] = model.jitter;
    j["weight_mean"] = vector_to_json(model.weight_mean);
    json chol = json::array(); // lower triangle, row-major
    for (Eigen::Index i = 0; i < model.inner_chol.rows(); ++i)
        for (Eigen::Index c = 0; c <= i; ++c)
            chol.push_back(model.inner_chol(i, c));
    j["inner_chol_lower"] = chol;
    json entries = json::array();
    for (size_t i = 0; i < model.entry_kinds.size(); ++i) {
        json e;
        e["kind"] = to_string(model.entry_kinds[i]);
        e["noise_group"] = model.entry_groups[i];
        if (i < info.entry_digests.size()) e["digest"] = info.entry_digests[i];
        if (i < info.entry_offsets.size()) e["offset"] = info.entry_offsets[i];
        entries.push_back(e);
    }
    j["entries"] = entries;
    j["n_rows"] = model.n_rows;
    j["train_span"] = {model.train_t0, model.train_t1};
    j["n_total_bins"] = info.n_total_bins;
    if (!info.config_digest.empty()) j["config_digest"] = info.config_digest;
    write_text(path, j.dump(2) + "\n");
}

LoadedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open model file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError("model file '" + path.string() +
                              "' is not valid JSON: " + e.what());
    }
    if (!j.contains("magic") || j["magic"] != kModelMagic)
        throw ValidationError("file '" + path.string() +
                              "' is not a loadrec model");
    if (j["schema_version"].get<int>() != kModelSchema)
        throw ValidationError("unsupported model schema version in '" +
                              path.string() + "'");

    LoadedModel loaded;
    TrainedModel& model = loaded.model;
    model.theta.sigma_s2 = j["theta"]["sigma_s2"].get<double>();
    model.theta.sigma_n2 = vector_from_json(j["theta"]["sigma_n2"]);
    model.scales.f = vector_from_json(j["scales"]["f"]);
    model.scales.lambda = vector_from_json(j["scales"]["lambda"]);
    model.scales.validate();
    model.log_marginal = j["log_marginal"].get<double>();
    model.jitter = j["jitter"].get<double>();
    model.weight_mean = vector_from_json(j["weight_mean"]);
    const Eigen::Index k = model.weight_mean.size();
    model.inner_chol = Eigen::MatrixXd::Zero(k, k);
    const auto& chol = j["inner_chol_lower"];
    size_t pos = 0;
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index c = 0; c <= i; ++c)
            model.inner_chol(i, c) = chol.at(pos++).get<double>();
    for (const auto& e : j["entries"]) {
        model.entry_kinds.push_back(
            kind_from_string(e["kind"].get<std::string>()));
        model.entry_groups.push_back(e["noise_group"].get<int>());
        if (e.contains("digest"))
            loaded.info.entry_digests.push_back(e["digest"].get<std::string>());
        if (e.contains("offset"))
            loaded.info.entry_offsets.push_back(e["offset"].get<double>());
    }
    model.n_rows = j["n_rows"].get<Eigen::Index>();
    model.train_t0 = j["train_span"][0].get<double>();
    model.train_t1 = j["train_span"][1].get<double>();
    loaded.info.n_total_bins = j.value("n_total_bins", Eigen::Index{0});
    loaded.info.config_digest = j.value("config_digest", std::string());
    return loaded;
}

} // namespace loadrec::io
