// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/modal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <utility>

namespace loadrec {

SensorArray::SensorArray(std::vector<TimeSeries> channels,
                         std::vector<std::string> locations)
    : channels_(std::move(channels)), locations_(std::move(locations)) {
    if (channels_.empty()) throw ValidationError("sensor array has no channels");
    const auto& first = channels_[0];
    for (const auto& ch : channels_) {
        if (ch.kind() != first.kind())
            throw ValidationError("sensor array channels must share a kind");
        if (ch.size() != first.size() ||
            (ch.t() - first.t()).cwiseAbs().maxCoeff() >
                1e-9 * std::max(1.0, first.duration()))
            throw ValidationError("sensor array channels must share the time grid");
    }
    if (locations_.empty())
        for (size_t i = 0; i < channels_.size(); ++i)
            locations_.push_back("ch" + std::to_string(i));
    if (locations_.size() != channels_.size())
        throw ValidationError("location label count does not match channels");
}

Eigen::MatrixXd SensorArray::matrix() const {
    Eigen::MatrixXd z(n_channels(), channels_[0].size());
    for (Eigen::Index s = 0; s < n_channels(); ++s)
        z.row(s) = channels_[static_cast<size_t>(s)].values().transpose();
    return z;
}

std::vector<TimeSeries> modal_decompose(const SensorArray& array,
                                        const ModeShapeSet& shapes) {
    const Eigen::MatrixXd& phi = shapes.phi();
    if (array.n_channels() != phi.rows())
        throw ValidationError("sensor count does not match mode shape rows");
    if (phi.rows() < phi.cols())
        throw ValidationError("need at least as many sensors as modes");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi);
    const double cond = svd.singularValues()[0] /
                        svd.singularValues()[svd.singularValues().size() - 1];
    if (!(cond < 1e12))
        throw DegenerateModeShapes("mode shape matrix is rank deficient");

    const Eigen::MatrixXd z = array.matrix(); // N_s x N_t
    Eigen::MatrixXd u;                        // N_m x N_t
    if (cond > 1e6) {
        u = phi.colPivHouseholderQr().solve(z);
    } else {
        const Eigen::MatrixXd gram = phi.transpose() * phi;
        u = gram.llt().solve(phi.transpose() * z);
    }

    std::vector<TimeSeries> modal;
    modal.reserve(static_cast<size_t>(phi.cols()));
    for (Eigen::Index m = 0; m < phi.cols(); ++m)
        modal.emplace_back(array.t(), u.row(m).transpose(), array.kind(),
                           array.channels()[0].unit());
    return modal;
}

SensorArray modal_superpose(const std::vector<TimeSeries>& modal,
                            const ModeShapeSet& shapes,
                            std::vector<std::string> locations) {
    if (modal.empty()) throw ValidationError("no modal series given");
    if (static_cast<Eigen::Index>(modal.size()) != shapes.n_modes())
        throw ValidationError("modal series count does not match mode shapes");
    const auto& t = modal[0].t();
    for (const auto& u : modal)
        if (u.size() != modal[0].size())
            throw ValidationError("modal series must share the time grid");

    const Eigen::MatrixXd& phi = shapes.phi();
    std::vector<TimeSeries> channels;
    channels.reserve(static_cast<size_t>(phi.rows()));
    for (Eigen::Index s = 0; s < phi.rows(); ++s) {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(t.size());
        for (Eigen::Index m = 0; m < phi.cols(); ++m)
            z += phi(s, m) * modal[static_cast<size_t>(m)].values();
        channels.emplace_back(t, std::move(z), modal[0].kind(),
                              modal[0].unit());
    }
    return SensorArray(std::move(channels), std::move(locations));
}

} // namespace loadrec
