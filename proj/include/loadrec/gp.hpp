// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "loadrec/basis.hpp"
#include "loadrec/time_series.hpp"

namespace loadrec {

/// One training dataset: a response series plus the noise group whose
/// variance it shares. Groups generalise per-kind noise to sensor groups of
/// differing quality.
struct DatasetEntry {
    TimeSeries series;
    int noise_group = 0;
};

/// Ordered collection of training datasets. Entries may have distinct time
/// grids and lengths; noise group ids must form a contiguous range 0..G-1.
/// The reference entry supplies the spectrum from which basis scales are
/// extracted.
struct DatasetStack {
    std::vector<DatasetEntry> entries;
    Eigen::Index reference = 0;

    void validate() const;
    int n_groups() const;
    Eigen::Index total_rows() const;
    Eigen::VectorXd stacked_values() const;
    const DatasetEntry& reference_entry() const;
};

/// Optimisable model parameters: the response variance scale and one noise
/// variance per group. The optimiser works in log-space, so positivity is
/// structural there; direct evaluation accepts zeros.
struct Hyperparameters {
    double sigma_s2 = 1.0;
    Eigen::VectorXd sigma_n2;
};

/// Stabilisation constant added to every noise-diagonal entry before
/// factorization: max(1e-10 * max(sigma_n2), 1e-12). The floor keeps the
/// inversion well posed in the noiseless limit.
double base_jitter(const Hyperparameters& theta);

/// Vertically stacked response basis with the per-entry row blocks recorded,
/// so the block-diagonal noise structure can be applied without forming any
/// full covariance.
struct ResponseDesign {
    struct Block {
        Eigen::Index row0 = 0;
        Eigen::Index rows = 0;
        int group = 0;
        SignalKind kind = SignalKind::Displacement;
    };
    Eigen::MatrixXd psi; // sum(N_t) x 2*N_fr
    std::vector<Block> blocks;
    int n_groups = 0;

    Eigen::Index rows() const { return psi.rows(); }
    Eigen::Index k() const { return psi.cols(); }
};

/// Evaluates each entry's basis on its own time grid with the shared scales
/// and stacks the blocks in entry order.
ResponseDesign assemble_response_basis(const DatasetStack& stack,
                                       const SpectralScales& scales);

/// log p(y | theta) for the low-rank-plus-diagonal covariance
/// sigma_s2 * Psi Psi^T + Sigma_n, evaluated through the Woodbury identity and
/// the matrix determinant lemma. Cost O(sum(N_t) * K^2 + K^3) with
/// K = 2*N_fr; the dense covariance is never formed. Throws
/// NumericalBreakdown if the inner factorization fails after jitter
/// escalation (x10, three retries).
double log_marginal_likelihood(const Hyperparameters& theta,
                               const ResponseDesign& design,
                               const Eigen::VectorXd& y);

struct FitConfig {
    int starts = 4;
    std::uint64_t seed = 0;
    double tol = 1e-6;       // simplex parameter tolerance, log-space
    int max_iterations = 0;  // 0: optimiser default
    double start_spread = 1.5;
};

/// Frozen result of maximum-likelihood training. Prediction needs only the
/// scales, the posterior basis-weight mean and the Cholesky factor of the
/// scaled inner matrix B = I + sigma_s2 * Psi^T Sigma_n^-1 Psi, all cached
/// here; the factor is rebuilt whenever theta changes (models are immutable,
/// so that means at construction).
struct TrainedModel {
    Hyperparameters theta;
    SpectralScales scales;
    double log_marginal = 0.0;
    double jitter = 0.0;
    Eigen::VectorXd weight_mean; // K
    Eigen::MatrixXd inner_chol;  // lower-triangular, K x K
    std::vector<SignalKind> entry_kinds;
    std::vector<int> entry_groups;
    Eigen::Index n_rows = 0;
    double train_t0 = 0.0;
    double train_t1 = 0.0;
    int starts_failed = 0;

    /// Fraction of the marginal variance explained by the response model for
    /// one noise group.
    double r_sigma(int group) const {
        return theta.sigma_s2 / (theta.sigma_s2 + theta.sigma_n2[group]);
    }
};

/// Maximises the log marginal likelihood over log-parameterised theta with a
/// multi-start Nelder-Mead simplex. Initialisation: sigma_s2 = 1 and
/// sigma_n2[g] = var(group g data) / 10; further starts perturb the initial
/// point deterministically from the config seed. Ties between equally good
/// starts resolve to the lowest start index. Throws FitFailed when every
/// start breaks down.
TrainedModel fit(const DatasetStack& stack, const SpectralScales& scales,
                 const FitConfig& cfg = {});

enum class CovMode { Full, Diagonal };

/// Posterior over the modal load at the prediction instants.
struct ForcePosterior {
    Eigen::VectorXd t;
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
    Eigen::MatrixXd cov; // empty in Diagonal mode
    CovMode mode = CovMode::Full;
    int clipped_negative = 0;
};

/// mu_q = sigma_s2 Psi_q Psi_r^T Sigma^-1 y and
/// Sigma_q = sigma_s2 Psi_q Psi_q^T
///         - sigma_s4 Psi_q Psi_r^T Sigma^-1 Psi_r Psi_q^T,
/// both evaluated through the cached low-rank factorization. The covariance
/// is symmetrised and negative diagonal entries are clipped to zero with a
/// counter.
ForcePosterior predict_force(const TrainedModel& model, const Oscillator& osc,
                             const Eigen::VectorXd& t_pred,
                             CovMode mode = CovMode::Full);

struct ResponsePosterior {
    Eigen::VectorXd t;
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
    Eigen::MatrixXd cov;
    CovMode mode = CovMode::Full;
    SignalKind kind = SignalKind::Displacement;
    int clipped_negative = 0;
};

/// Same conditioning machinery as predict_force with the force basis replaced
/// by the requested response basis; yields the denoised signal.
ResponsePosterior denoise_response(const TrainedModel& model, SignalKind kind,
                                   const Eigen::VectorXd& t_pred,
                                   CovMode mode = CovMode::Full);

/// Draws n joint samples from the prior N(0, sigma_s2 Psi Psi^T + Sigma_n)
/// via the low-rank construction sigma_s * Psi w + sigma_n * eps. All kinds of
/// one draw share the same weight vector w, which links them through the
/// analytic derivatives. Kind i uses noise variance sigma_n2[i].
/// Result: result[draw][kind_index].
std::vector<std::vector<TimeSeries>>
sample_prior(const SpectralScales& scales, const Hyperparameters& theta,
             const std::vector<SignalKind>& kinds, const Eigen::VectorXd& t,
             int n, std::uint64_t seed);

/// Per-entry kappa selection applied to every dataset of the stack, with the
/// kept bins merged and the amplitudes copied from the reference entry's
/// spectrum (converted to displacement units). All entries must be uniformly
/// sampled on a shared bin grid.
SpectralScales select_frequencies_union(const DatasetStack& stack,
                                        const CutoffRule& rule);

} // namespace loadrec
