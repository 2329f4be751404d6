// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <Eigen/Core>

#include "loadrec/time_series.hpp"

namespace loadrec {

/// Reduced frequency grid with per-frequency amplitude scales, in
/// displacement units. Frequencies are strictly increasing and positive
/// (DC is never part of the basis); at least one scale must be nonzero.
struct SpectralScales {
    Eigen::VectorXd f;      // Hz
    Eigen::VectorXd lambda; // >= 0, same length as f

    Eigen::Index size() const { return f.size(); }
    void validate() const;
};

/// Frequency selection rule: either the amplitude cutoff
/// kappa = mean + c * std of the magnitude vector, or an explicit band
/// [f_min, f_max] snapped to the spectrum's bins.
struct CutoffRule {
    enum class Type { MeanSigma, Band };
    Type type = Type::MeanSigma;
    double c = 2.0;
    double f_min = 0.0;
    double f_max = 0.0;

    static CutoffRule mean_sigma(double c = 2.0) {
        CutoffRule r;
        r.type = Type::MeanSigma;
        r.c = c;
        return r;
    }
    static CutoffRule band(double f_min, double f_max) {
        CutoffRule r;
        r.type = Type::Band;
        r.f_min = f_min;
        r.f_max = f_max;
        return r;
    }
};

/// Keeps the spectrum bins selected by the rule and copies their amplitudes.
/// The DC bin is never kept. Throws NoFrequenciesSelected when nothing
/// survives; callers may relax the rule.
SpectralScales select_frequencies(const Spectrum& spectrum,
                                  const CutoffRule& rule);

/// Rescales amplitudes extracted from a velocity or acceleration reference to
/// displacement units by dividing with (2*pi*f)^order, so that a single set of
/// scales drives the bases of every response kind.
SpectralScales to_displacement_scales(SpectralScales scales,
                                      SignalKind reference_kind);

/// Evaluated basis block of shape N_t x 2*N_fr. For frequency index j
/// (0-based), column 2j is the sine-derived column and column 2j+1 the
/// cosine-derived column; this layout is a fixed contract.
struct BasisMatrix {
    Eigen::MatrixXd values;
    SignalKind kind;
    Eigen::VectorXd t;
    SpectralScales scales;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

/// Single-mode harmonic oscillator parameters.
class Oscillator {
public:
    Oscillator(double mass, double zeta, double f_n);

    double mass() const { return mass_; }
    double zeta() const { return zeta_; }
    double f_n() const { return f_n_; }
    double omega_n() const;
    double natural_period() const { return 1.0 / f_n_; }

private:
    double mass_;
    double zeta_;
    double f_n_;
};

/// Mode shape matrix (sensors x modes) with per-mode oscillator parameters.
/// Columns are normalised to unit maximum absolute value at construction;
/// modal masses must already match that normalisation.
class ModeShapeSet {
public:
    ModeShapeSet(Eigen::MatrixXd phi, Eigen::VectorXd masses,
                 Eigen::VectorXd zetas, Eigen::VectorXd f_ns);

    const Eigen::MatrixXd& phi() const { return phi_; }
    Eigen::Index n_sensors() const { return phi_.rows(); }
    Eigen::Index n_modes() const { return phi_.cols(); }
    Oscillator oscillator(Eigen::Index mode) const;

    /// Copy restricted to the first n_modes columns.
    ModeShapeSet truncated(Eigen::Index n_modes) const;

private:
    Eigen::MatrixXd phi_;
    Eigen::VectorXd masses_;
    Eigen::VectorXd zetas_;
    Eigen::VectorXd f_ns_;
};

/// psi_u: entry(i, 2j) = sin(2 pi t_i f_j) * lambda_j,
///        entry(i, 2j+1) = cos(2 pi t_i f_j) * lambda_j.
/// The grid t may be non-uniform.
BasisMatrix displacement_basis(const Eigen::VectorXd& t,
                               const SpectralScales& scales);

/// Analytic time derivative of the displacement basis.
/// order 1: 2 pi f [cos, -sin] lambda; order 2: -(2 pi f)^2 [sin, cos] lambda.
BasisMatrix derivative_basis(const Eigen::VectorXd& t,
                             const SpectralScales& scales, int order);

/// Basis for the named response kind (order 0, 1 or 2).
BasisMatrix response_basis(const Eigen::VectorXd& t,
                           const SpectralScales& scales, SignalKind kind);

/// Force basis from the oscillator equation:
/// psi_q = m psi_a + 2 m zeta omega_n psi_v + m omega_n^2 psi_u.
BasisMatrix force_basis(const Eigen::VectorXd& t, const SpectralScales& scales,
                        const Oscillator& osc);

} // namespace loadrec
