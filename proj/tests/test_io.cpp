// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "loadrec/io.hpp"
#include "loadrec/signal.hpp"

using namespace loadrec;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir =
        fs::temp_directory_path() / "loadrec-io-tests";
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_CASE("time CSV round trip preserves values") {
    const fs::path path = temp_dir() / "roundtrip.csv";
    Eigen::VectorXd t = uniform_grid(50, 10.0);
    Eigen::VectorXd a(50), b(50);
    Rng rng(5);
    for (Eigen::Index i = 0; i < 50; ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal() * 1e-7;
    }
    io::write_csv(path, {"time", "u1", "u2"}, {t, a, b});
    const io::ChannelSet set = io::read_time_csv(path);
    REQUIRE(set.n_channels() == 2);
    CHECK(set.names[0] == "u1");
    CHECK((set.t - t).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((set.channel("u1") - a).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((set.channel("u2") - b).cwiseAbs().maxCoeff() < 1e-20);
}

TEST_CASE("time CSV validation names the file and line") {
    const fs::path bad_header = temp_dir() / "bad_header.csv";
    write_file(bad_header, "t,u\n0,1\n1,2\n");
    try {
        io::read_time_csv(bad_header);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("bad_header.csv") !=
              std::string::npos);
        CHECK(std::string(e.what()).find("time") != std::string::npos);
    }

    const fs::path bad_cell = temp_dir() / "bad_cell.csv";
    write_file(bad_cell, "time,u\n0,1\n1,oops\n");
    try {
        io::read_time_csv(bad_cell);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("bad_cell.csv:3") !=
              std::string::npos);
    }

    CHECK_THROWS_AS(io::read_time_csv(temp_dir() / "missing.csv"),
                    ValidationError);
}

TEST_CASE("model save and load reproduce predictions exactly") {
    const auto scenario = fixtures::make_sdof_scenario(31, 0.05, 30.0);
    DatasetStack stack = fixtures::make_stack(scenario.responses, 20.0, 7);
    const SpectralScales scales =
        select_frequencies_union(stack, CutoffRule::mean_sigma(2.0));
    FitConfig cfg;
    cfg.seed = 9;
    const TrainedModel model = fit(stack, scales, cfg);

    io::ModelInfo info;
    for (const auto& entry : stack.entries)
        info.entry_digests.push_back(io::series_digest(entry.series));
    info.n_total_bins = 401;
    const fs::path path = temp_dir() / "model.json";
    io::save_model(path, model, info);
    const io::LoadedModel loaded = io::load_model(path);

    CHECK(loaded.model.theta.sigma_s2 == model.theta.sigma_s2);
    CHECK((loaded.model.theta.sigma_n2 - model.theta.sigma_n2)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(loaded.info.n_total_bins == 401);
    CHECK(loaded.info.entry_digests == info.entry_digests);

    const Oscillator osc(1.0, 0.02, 1.0);
    const Eigen::VectorXd t_pred = uniform_grid(100, 20.0);
    const ForcePosterior a = predict_force(model, osc, t_pred, CovMode::Full);
    const ForcePosterior b =
        predict_force(loaded.model, osc, t_pred, CovMode::Full);
    CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("model loader rejects foreign and future files") {
    const fs::path not_model = temp_dir() / "not_model.json";
    write_file(not_model, "{\"magic\": \"something-else\"}\n");
    CHECK_THROWS_AS(io::load_model(not_model), ValidationError);

    const fs::path not_json = temp_dir() / "not_json.json";
    write_file(not_json, "time,u\n0,1\n");
    CHECK_THROWS_AS(io::load_model(not_json), ValidationError);
}

TEST_CASE("series digests change with any payload change") {
    const TimeSeries a(uniform_grid(16, 4.0), Eigen::VectorXd::Ones(16),
                       SignalKind::Displacement);
    Eigen::VectorXd tweaked = a.values();
    tweaked[7] += 1e-12;
    const TimeSeries b = a.with_values(tweaked);
    CHECK(io::series_digest(a) != io::series_digest(b));
    CHECK(io::series_digest(a) == io::series_digest(a));
    CHECK(io::series_digest(a).size() == 16);
}

TEST_CASE("matrix CSV reads a mode shape table") {
    const fs::path path = temp_dir() / "phi.csv";
    write_file(path, "mode1,mode2\n0.5,1\n1,-0.25\n");
    const Eigen::MatrixXd phi = io::read_matrix_csv(path);
    REQUIRE(phi.rows() == 2);
    REQUIRE(phi.cols() == 2);
    CHECK(phi(1, 1) == -0.25);
}
