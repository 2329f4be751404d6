// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/basis.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace loadrec {

using std::numbers::pi;

void SpectralScales::validate() const {
    if (f.size() == 0) throw ValidationError("empty frequency grid");
    if (f.size() != lambda.size())
        throw ValidationError("frequency and scale vectors differ in length");
    if (!(f[0] > 0.0))
        throw ValidationError("basis frequencies must be positive (no DC)");
    for (Eigen::Index j = 0; j + 1 < f.size(); ++j)
        if (!(f[j + 1] > f[j]))
            throw ValidationError("basis frequencies must be strictly increasing");
    if ((lambda.array() < 0.0).any())
        throw ValidationError("scales must be non-negative");
    if (lambda.maxCoeff() <= 0.0)
        throw ValidationError("at least one scale must be positive");
}

SpectralScales select_frequencies(const Spectrum& spectrum,
                                  const CutoffRule& rule) {
    const Eigen::Index nf = spectrum.f.size();
    if (nf == 0) throw ValidationError("empty spectrum");

    std::vector<Eigen::Index> keep;
    if (rule.type == CutoffRule::Type::MeanSigma) {
        const double mean = spectrum.magnitude.mean();
        const double var =
            (spectrum.magnitude.array() - mean).square().mean();
        const double kappa = mean + rule.c * std::sqrt(var);
        for (Eigen::Index k = 0; k < nf; ++k)
            if (spectrum.f[k] > 0.0 && spectrum.magnitude[k] > kappa)
                keep.push_back(k);
    } else {
        if (!(rule.f_min <= rule.f_max))
            throw ValidationError("band rule requires f_min <= f_max");
        for (Eigen::Index k = 0; k < nf; ++k)
            if (spectrum.f[k] > 0.0 && spectrum.f[k] >= rule.f_min &&
                spectrum.f[k] <= rule.f_max)
                keep.push_back(k);
    }
    if (keep.empty())
        throw NoFrequenciesSelected("no frequency bins selected by the rule");

    SpectralScales scales;
    scales.f.resize(static_cast<Eigen::Index>(keep.size()));
    scales.lambda.resize(static_cast<Eigen::Index>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) {
        scales.f[static_cast<Eigen::Index>(i)] = spectrum.f[keep[i]];
        scales.lambda[static_cast<Eigen::Index>(i)] =
            spectrum.magnitude[keep[i]];
    }
    if (scales.lambda.maxCoeff() <= 0.0)
        throw NoFrequenciesSelected("all selected bins have zero amplitude");
    return scales;
}

SpectralScales to_displacement_scales(SpectralScales scales,
                                      SignalKind reference_kind) {
    const int order = derivative_order(reference_kind);
    if (order > 0)
        scales.lambda.array() /=
            (2.0 * pi * scales.f.array()).pow(static_cast<double>(order));
    scales.validate();
    return scales;
}

Oscillator::Oscillator(double mass, double zeta, double f_n)
    : mass_(mass), zeta_(zeta), f_n_(f_n) {
    if (!(mass > 0.0)) throw ValidationError("oscillator mass must be positive");
    if (!(zeta >= 0.0 && zeta < 1.0))
        throw ValidationError("damping ratio must lie in [0, 1)");
    if (!(f_n > 0.0))
        throw ValidationError("natural frequency must be positive");
}

double Oscillator::omega_n() const { return 2.0 * pi * f_n_; }

ModeShapeSet::ModeShapeSet(Eigen::MatrixXd phi, Eigen::VectorXd masses,
                           Eigen::VectorXd zetas, Eigen::VectorXd f_ns)
    : phi_(std::move(phi)), masses_(std::move(masses)),
      zetas_(std::move(zetas)), f_ns_(std::move(f_ns)) {
    const Eigen::Index nm = phi_.cols();
    if (nm == 0 || phi_.rows() == 0)
        throw ValidationError("mode shape matrix is empty");
    if (masses_.size() != nm || zetas_.size() != nm || f_ns_.size() != nm)
        throw ValidationError("modal parameter count does not match mode count");
    if (!phi_.allFinite())
        throw ValidationError("mode shapes contain non-finite entries");
    for (Eigen::Index j = 0; j < nm; ++j) {
        const double peak = phi_.col(j).cwiseAbs().maxCoeff();
        if (peak <= 0.0)
            throw ValidationError("mode shape column is identically zero");
        phi_.col(j) /= peak;
        // Parameter validity is checked through the Oscillator invariants.
        Oscillator check(masses_[j], zetas_[j], f_ns_[j]);
        (void)check;
    }
}

Oscillator ModeShapeSet::oscillator(Eigen::Index mode) const {
    if (mode < 0 || mode >= n_modes())
        throw ValidationError("mode index out of range");
    return Oscillator(masses_[mode], zetas_[mode], f_ns_[mode]);
}

ModeShapeSet ModeShapeSet::truncated(Eigen::Index n) const {
    if (n < 1 || n > n_modes())
        throw ValidationError("invalid truncation mode count");
    return ModeShapeSet(phi_.leftCols(n), masses_.head(n), zetas_.head(n),
                        f_ns_.head(n));
}

namespace {

// Fills the sin/cos column pair for each frequency after applying the
// per-frequency prefactors (fsin, fcos) and the sign pattern of the requested
// derivative order.
BasisMatrix build_basis(const Eigen::VectorXd& t, const SpectralScales& scales,
                        SignalKind kind, int order) {
    scales.validate();
    const Eigen::Index n = t.size();
    const Eigen::Index nf = scales.size();
    BasisMatrix basis;
    basis.kind = kind;
    basis.t = t;
    basis.scales = scales;
    basis.values.resize(n, 2 * nf);
    for (Eigen::Index j = 0; j < nf; ++j) {
        const double w = 2.0 * pi * scales.f[j];
        const double lam = scales.lambda[j];
        double sin_coef = 0.0, cos_coef = 0.0; // multipliers of sin and cos
        switch (order) {
        case 0: sin_coef = lam; cos_coef = lam; break;
        case 1: sin_coef = w * lam; cos_coef = -w * lam; break;
        case 2: sin_coef = -w * w * lam; cos_coef = -w * w * lam; break;
        default: throw ValidationError("derivative order must be 0, 1 or 2");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s = std::sin(w * t[i]);
            const double c = std::cos(w * t[i]);
            if (order == 1) {
                basis.values(i, 2 * j) = sin_coef * c;
                basis.values(i, 2 * j + 1) = cos_coef * s;
            } else {
                basis.values(i, 2 * j) = sin_coef * s;
                basis.values(i, 2 * j + 1) = cos_coef * c;
            }
        }
    }
    return basis;
}

} // namespace

BasisMatrix displacement_basis(const Eigen::VectorXd& t,
                               const SpectralScales& scales) {
    return build_basis(t, scales, SignalKind::Displacement, 0);
}

BasisMatrix derivative_basis(const Eigen::VectorXd& t,
                             const SpectralScales& scales, int order) {
    if (order != 1 && order != 2)
        throw ValidationError("derivative order must be 1 or 2");
    return build_basis(
        t, scales,
        order == 1 ? SignalKind::Velocity : SignalKind::Acceleration, order);
}

BasisMatrix response_basis(const Eigen::VectorXd& t,
                           const SpectralScales& scales, SignalKind kind) {
    return build_basis(t, scales, kind, derivative_order(kind));
}

BasisMatrix force_basis(const Eigen::VectorXd& t, const SpectralScales& scales,
                        const Oscillator& osc) {
    BasisMatrix u = displacement_basis(t, scales);
    BasisMatrix v = derivative_basis(t, scales, 1);
    BasisMatrix a = derivative_basis(t, scales, 2);
    BasisMatrix q;
    q.kind = SignalKind::Force;
    q.t = u.t;
    q.scales = scales;
    const double m = osc.mass();
    const double wn = osc.omega_n();
    q.values = m * a.values + (2.0 * m * osc.zeta() * wn) * v.values +
               (m * wn * wn) * u.values;
    return q;
}

} // namespace loadrec
