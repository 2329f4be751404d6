// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fixtures.hpp"
#include "loadrec/modal.hpp"
#include "loadrec/rng.hpp"

using namespace loadrec;

namespace {

SensorArray random_array(const Eigen::MatrixXd& values, SignalKind kind,
                         double fs = 10.0) {
    std::vector<TimeSeries> channels;
    for (Eigen::Index s = 0; s < values.rows(); ++s)
        channels.emplace_back(uniform_grid(values.cols(), fs),
                              values.row(s).transpose(), kind);
    return SensorArray(std::move(channels));
}

ModeShapeSet make_shapes(const Eigen::MatrixXd& phi) {
    const Eigen::Index nm = phi.cols();
    return ModeShapeSet(phi, Eigen::VectorXd::Ones(nm),
                        Eigen::VectorXd::Constant(nm, 0.01),
                        Eigen::VectorXd::LinSpaced(nm, 1.0, 2.0));
}

} // namespace

TEST_CASE("identity mode shapes pass channels through") {
    const Eigen::Index n_s = 3, n_t = 50;
    Rng rng(1);
    Eigen::MatrixXd z(n_s, n_t);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    const SensorArray array = random_array(z, SignalKind::Acceleration);
    const ModeShapeSet shapes = make_shapes(Eigen::MatrixXd::Identity(3, 3));
    const auto modal = modal_decompose(array, shapes);
    REQUIRE(modal.size() == 3);
    for (Eigen::Index m = 0; m < 3; ++m) {
        CHECK(modal[static_cast<size_t>(m)].kind() == SignalKind::Acceleration);
        CHECK((modal[static_cast<size_t>(m)].values().transpose() - z.row(m))
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);
    }
}

TEST_CASE("decomposition is exact on the range of the mode shapes") {
    Rng rng(2);
    const Eigen::Index n_s = 10, n_m = 4, n_t = 80;
    const Eigen::MatrixXd phi = fixtures::cantilever_mode_shapes(n_s, n_m);
    Eigen::MatrixXd a(n_m, n_t);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.normal();
    const SensorArray sensors =
        random_array(phi * a, SignalKind::Displacement);
    const auto modal = modal_decompose(sensors, make_shapes(phi));
    for (Eigen::Index m = 0; m < n_m; ++m)
        CHECK((modal[static_cast<size_t>(m)].values().transpose() - a.row(m))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("least-squares decomposition attenuates sensor noise") {
    const Eigen::Index n_s = 10, n_m = 3, n_t = 400;
    const Eigen::MatrixXd phi = fixtures::cantilever_mode_shapes(n_s, n_m);
    const Eigen::MatrixXd gram_inv =
        (phi.transpose() * phi).inverse();

    int attenuated = 0;
    const int n_seeds = 100;
    const double sigma = 0.3;
    for (int seed = 0; seed < n_seeds; ++seed) {
        Rng rng(derive_seed(7, "modal-noise", static_cast<std::uint64_t>(seed)));
        Eigen::MatrixXd noise(n_s, n_t);
        for (Eigen::Index i = 0; i < noise.size(); ++i)
            noise(i) = sigma * rng.normal();
        const auto modal = modal_decompose(
            random_array(noise, SignalKind::Velocity), make_shapes(phi));
        // Modal noise variance should match sigma^2 [(Phi^T Phi)^-1]_jj and
        // in particular stay below the channel variance here.
        bool ok = true;
        for (Eigen::Index m = 0; m < n_m; ++m) {
            const double var =
                modal[static_cast<size_t>(m)].values().squaredNorm() /
                static_cast<double>(n_t);
            if (var > sigma * sigma * gram_inv(m, m) * 1.5) ok = false;
        }
        if (ok) ++attenuated;
    }
    CHECK(attenuated >= 95);
}

TEST_CASE("decompose after superpose is the identity on modal coordinates") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n_s = 4 + static_cast<Eigen::Index>(rng.below(6));
        const Eigen::Index n_m = 1 + static_cast<Eigen::Index>(
                                         rng.below(static_cast<std::uint64_t>(n_s)));
        Eigen::MatrixXd phi(n_s, n_m);
        for (Eigen::Index i = 0; i < phi.size(); ++i) phi(i) = rng.normal();
        const ModeShapeSet shapes = make_shapes(phi);

        const Eigen::Index n_t = 30;
        std::vector<TimeSeries> modal;
        Eigen::MatrixXd a(n_m, n_t);
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.normal();
        for (Eigen::Index m = 0; m < n_m; ++m)
            modal.emplace_back(uniform_grid(n_t, 5.0), a.row(m).transpose(),
                               SignalKind::Displacement);

        const SensorArray sensors = modal_superpose(modal, shapes);
        const auto back = modal_decompose(sensors, shapes);
        for (Eigen::Index m = 0; m < n_m; ++m)
            CHECK((back[static_cast<size_t>(m)].values() -
                   modal[static_cast<size_t>(m)].values())
                      .cwiseAbs()
                      .maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("zero modal input superposes to zero sensors") {
    const Eigen::MatrixXd phi = fixtures::cantilever_mode_shapes(5, 2);
    std::vector<TimeSeries> modal;
    for (int m = 0; m < 2; ++m)
        modal.emplace_back(uniform_grid(20, 5.0), Eigen::VectorXd::Zero(20),
                           SignalKind::Displacement);
    const SensorArray sensors = modal_superpose(modal, make_shapes(phi));
    for (const auto& ch : sensors.channels())
        CHECK(ch.values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rank-deficient mode shapes are rejected") {
    Eigen::MatrixXd phi(4, 2);
    phi.col(0) << 1.0, 2.0, 3.0, 4.0;
    phi.col(1) = 2.0 * phi.col(0);
    Rng rng(4);
    Eigen::MatrixXd z(4, 30);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    const SensorArray array = random_array(z, SignalKind::Displacement);
    CHECK_THROWS_AS(modal_decompose(array, make_shapes(phi)),
                    DegenerateModeShapes);
}

TEST_CASE("more modes than sensors is rejected") {
    const Eigen::MatrixXd phi = fixtures::cantilever_mode_shapes(2, 3);
    Rng rng(5);
    Eigen::MatrixXd z(2, 30);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    const SensorArray array = random_array(z, SignalKind::Displacement);
    CHECK_THROWS_AS(modal_decompose(array, make_shapes(phi)), ValidationError);
}

TEST_CASE("mode shape scaling is absorbed by normalisation") {
    // Columns are magnitude-normalised at construction, so a rescaled input
    // matrix yields the same shapes; load magnitudes then follow the modal
    // masses alone.
    const Eigen::MatrixXd phi = fixtures::cantilever_mode_shapes(6, 2);
    const ModeShapeSet a = make_shapes(phi);
    const ModeShapeSet b = make_shapes((2.0 * phi).eval());
    CHECK((a.phi() - b.phi()).cwiseAbs().maxCoeff() < 1e-15);
}
