// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/gp.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <utility>

#include "loadrec/optim.hpp"
#include "loadrec/rng.hpp"
#include "loadrec/signal.hpp"

namespace loadrec {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kLogParamBound = 46.0; // exp(46) ~ 1e20

struct GramCache {
    std::vector<Eigen::MatrixXd> gram; // Psi_g^T Psi_g per group
    std::vector<Eigen::VectorXd> proj; // Psi_g^T y_g per group
    std::vector<double> ysq;           // |y_g|^2 per group
    std::vector<Eigen::Index> rows;    // samples per group
    Eigen::Index k = 0;
    Eigen::Index total = 0;
};

GramCache build_cache(const ResponseDesign& design, const Eigen::VectorXd& y) {
    GramCache cache;
    cache.k = design.k();
    cache.total = design.rows();
    cache.gram.assign(design.n_groups,
                      Eigen::MatrixXd::Zero(cache.k, cache.k));
    cache.proj.assign(design.n_groups, Eigen::VectorXd::Zero(cache.k));
    cache.ysq.assign(design.n_groups, 0.0);
    cache.rows.assign(design.n_groups, 0);
    for (const auto& block : design.blocks) {
        const auto psi_g = design.psi.middleRows(block.row0, block.rows);
        const auto y_g = y.segment(block.row0, block.rows);
        cache.gram[block.group].noalias() += psi_g.transpose() * psi_g;
        cache.proj[block.group].noalias() += psi_g.transpose() * y_g;
        cache.ysq[block.group] += y_g.squaredNorm();
        cache.rows[block.group] += block.rows;
    }
    return cache;
}

struct InnerFactor {
    Eigen::LLT<Eigen::MatrixXd> llt; // of B = I + sigma_s2 Psi^T D^-1 Psi
    Eigen::VectorXd d;               // per-group effective noise variances
    Eigen::VectorXd b;               // Psi^T D^-1 y
    double jitter = 0.0;
    double logdet_b = 0.0;
};

// Factorises the scaled inner matrix, escalating the jitter by x10 up to
// three retries on breakdown.
InnerFactor factor_inner(const Hyperparameters& theta, const GramCache& cache) {
    const int n_groups = static_cast<int>(cache.gram.size());
    double jitter = base_jitter(theta);
    for (int attempt = 0; attempt <= 3; ++attempt, jitter *= 10.0) {
        InnerFactor factor;
        factor.jitter = jitter;
        factor.d.resize(n_groups);
        Eigen::MatrixXd inner =
            Eigen::MatrixXd::Identity(cache.k, cache.k);
        factor.b = Eigen::VectorXd::Zero(cache.k);
        bool finite = true;
        for (int g = 0; g < n_groups; ++g) {
            factor.d[g] = theta.sigma_n2[g] + jitter;
            if (!(factor.d[g] > 0.0) || !std::isfinite(factor.d[g])) {
                finite = false;
                break;
            }
            inner.noalias() += (theta.sigma_s2 / factor.d[g]) * cache.gram[g];
            factor.b.noalias() += cache.proj[g] / factor.d[g];
        }
        if (!finite || !inner.allFinite()) continue;
        factor.llt.compute(inner);
        if (factor.llt.info() != Eigen::Success) continue;
        const auto& l = factor.llt.matrixLLT();
        factor.logdet_b = 0.0;
        for (Eigen::Index i = 0; i < cache.k; ++i)
            factor.logdet_b += 2.0 * std::log(l(i, i));
        if (!std::isfinite(factor.logdet_b)) continue;
        return factor;
    }
    throw NumericalBreakdown(
        "inner-matrix Cholesky failed after jitter escalation");
}

double lml_quadratic_fast(const Hyperparameters& theta, const GramCache& cache,
                          const InnerFactor& factor) {
    double ydy = 0.0;
    for (size_t g = 0; g < cache.ysq.size(); ++g)
        ydy += cache.ysq[g] / factor.d[static_cast<Eigen::Index>(g)];
    const Eigen::VectorXd v = factor.llt.solve(factor.b);
    return ydy - theta.sigma_s2 * factor.b.dot(v);
}

double lml_logdet(const GramCache& cache, const InnerFactor& factor) {
    double logdet = factor.logdet_b;
    for (size_t g = 0; g < cache.rows.size(); ++g)
        logdet += static_cast<double>(cache.rows[g]) *
                  std::log(factor.d[static_cast<Eigen::Index>(g)]);
    return logdet;
}

double lml_from_cache(const Hyperparameters& theta, const GramCache& cache) {
    const InnerFactor factor = factor_inner(theta, cache);
    const double quad = lml_quadratic_fast(theta, cache, factor);
    const double logdet = lml_logdet(cache, factor);
    return -0.5 * (quad + logdet +
                   static_cast<double>(cache.total) * kLog2Pi);
}

void check_theta(const Hyperparameters& theta, int n_groups) {
    if (!(theta.sigma_s2 >= 0.0) || !std::isfinite(theta.sigma_s2))
        throw ValidationError("sigma_s2 must be finite and non-negative");
    if (theta.sigma_n2.size() != n_groups)
        throw ValidationError("noise variance count does not match groups");
    for (Eigen::Index g = 0; g < theta.sigma_n2.size(); ++g)
        if (!(theta.sigma_n2[g] >= 0.0) || !std::isfinite(theta.sigma_n2[g]))
            throw ValidationError("sigma_n2 must be finite and non-negative");
}

// Posterior weight statistics shared by training, prediction and denoising.
struct WeightPosterior {
    Eigen::VectorXd mean;       // sigma_s2 * B^-1 b
    Eigen::MatrixXd inner_chol; // lower factor of B
};

WeightPosterior weight_posterior(const Hyperparameters& theta,
                                 const InnerFactor& factor) {
    WeightPosterior post;
    post.mean = theta.sigma_s2 * factor.llt.solve(factor.b);
    post.inner_chol = factor.llt.matrixL();
    return post;
}

} // namespace

void DatasetStack::validate() const {
    if (entries.empty()) throw ValidationError("dataset stack is empty");
    if (reference < 0 ||
        reference >= static_cast<Eigen::Index>(entries.size()))
        throw ValidationError("reference entry index out of range");
    std::set<int> groups;
    int max_group = -1;
    for (const auto& entry : entries) {
        if (entry.noise_group < 0)
            throw ValidationError("noise group ids must be non-negative");
        groups.insert(entry.noise_group);
        max_group = std::max(max_group, entry.noise_group);
    }
    if (static_cast<int>(groups.size()) != max_group + 1)
        throw ValidationError("noise group ids must be contiguous from 0");
}

int DatasetStack::n_groups() const {
    int max_group = -1;
    for (const auto& entry : entries)
        max_group = std::max(max_group, entry.noise_group);
    return max_group + 1;
}

Eigen::Index DatasetStack::total_rows() const {
    Eigen::Index total = 0;
    for (const auto& entry : entries) total += entry.series.size();
    return total;
}

Eigen::VectorXd DatasetStack::stacked_values() const {
    Eigen::VectorXd y(total_rows());
    Eigen::Index row = 0;
    for (const auto& entry : entries) {
        y.segment(row, entry.series.size()) = entry.series.values();
        row += entry.series.size();
    }
    return y;
}

const DatasetEntry& DatasetStack::reference_entry() const {
    validate();
    return entries[static_cast<size_t>(reference)];
}

double base_jitter(const Hyperparameters& theta) {
    const double max_noise =
        theta.sigma_n2.size() > 0 ? theta.sigma_n2.maxCoeff() : 0.0;
    return std::max(1e-10 * max_noise, 1e-12);
}

ResponseDesign assemble_response_basis(const DatasetStack& stack,
                                       const SpectralScales& scales) {
    stack.validate();
    scales.validate();
    ResponseDesign design;
    design.n_groups = stack.n_groups();
    design.psi.resize(stack.total_rows(), 2 * scales.size());
    Eigen::Index row = 0;
    for (const auto& entry : stack.entries) {
        BasisMatrix basis =
            response_basis(entry.series.t(), scales, entry.series.kind());
        design.psi.middleRows(row, basis.rows()) = basis.values;
        design.blocks.push_back(
            {row, basis.rows(), entry.noise_group, entry.series.kind()});
        row += basis.rows();
    }
    return design;
}

double log_marginal_likelihood(const Hyperparameters& theta,
                               const ResponseDesign& design,
                               const Eigen::VectorXd& y) {
    check_theta(theta, design.n_groups);
    if (y.size() != design.rows())
        throw ValidationError("data vector length does not match design");
    const GramCache cache = build_cache(design, y);
    const InnerFactor factor = factor_inner(theta, cache);

    // Residual form of the quadratic: y^T Sigma^-1 y
    //   = r^T D^-1 r + sigma_s2 |B^-1 b|^2 with r = y - Psi w.
    // Both terms are non-negative, which avoids the cancellation of the
    // direct Woodbury subtraction for very small noise.
    const Eigen::VectorXd v = factor.llt.solve(factor.b);
    const Eigen::VectorXd w = theta.sigma_s2 * v;
    const Eigen::VectorXd r = y - design.psi * w;
    double quad = theta.sigma_s2 * v.squaredNorm();
    for (const auto& block : design.blocks)
        quad += r.segment(block.row0, block.rows).squaredNorm() /
                factor.d[block.group];
    const double logdet = lml_logdet(cache, factor);
    return -0.5 * (quad + logdet +
                   static_cast<double>(design.rows()) * kLog2Pi);
}

TrainedModel fit(const DatasetStack& stack, const SpectralScales& scales,
                 const FitConfig& cfg) {
    stack.validate();
    scales.validate();
    const ResponseDesign design = assemble_response_basis(stack, scales);
    const Eigen::VectorXd y = stack.stacked_values();
    const GramCache cache = build_cache(design, y);
    const int n_groups = design.n_groups;
    const int dim = 1 + n_groups;

    // Initial point: sigma_s2 = 1, sigma_n2[g] = var(group g) / 10.
    Eigen::VectorXd x0(dim);
    x0[0] = 0.0;
    for (int g = 0; g < n_groups; ++g) {
        const double mean_sq =
            cache.ysq[static_cast<size_t>(g)] /
            static_cast<double>(cache.rows[static_cast<size_t>(g)]);
        x0[1 + g] = std::log(std::max(mean_sq / 10.0, 1e-12));
    }

    auto unpack = [&](const Eigen::VectorXd& x) {
        Hyperparameters theta;
        theta.sigma_s2 = std::exp(x[0]);
        theta.sigma_n2.resize(n_groups);
        for (int g = 0; g < n_groups; ++g)
            theta.sigma_n2[g] = std::exp(x[1 + g]);
        return theta;
    };

    auto objective = [&](const Eigen::VectorXd& x) -> double {
        if (x.cwiseAbs().maxCoeff() > kLogParamBound)
            return std::numeric_limits<double>::infinity();
        try {
            return -lml_from_cache(unpack(x), cache);
        } catch (const NumericalBreakdown&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    SimplexOptions options;
    options.parameter_tol = cfg.tol;
    options.max_iterations = cfg.max_iterations;

    SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    int failed = 0;
    for (int start = 0; start < std::max(1, cfg.starts); ++start) {
        Eigen::VectorXd x_start = x0;
        if (start > 0) {
            Rng rng(derive_seed(cfg.seed, "fit-start",
                                static_cast<std::uint64_t>(start)));
            for (int i = 0; i < dim; ++i)
                x_start[i] += cfg.start_spread * rng.normal();
        }
        SimplexResult result = nelder_mead(objective, x_start, options);
        if (!std::isfinite(result.value)) {
            ++failed;
            continue;
        }
        if (result.value < best.value) best = result;
    }
    if (!std::isfinite(best.value))
        throw FitFailed("all optimisation starts broke down");

    TrainedModel model;
    model.theta = unpack(best.x);
    model.scales = scales;
    model.starts_failed = failed;
    const InnerFactor factor = factor_inner(model.theta, cache);
    model.jitter = factor.jitter;
    const WeightPosterior post = weight_posterior(model.theta, factor);
    model.weight_mean = post.mean;
    model.inner_chol = post.inner_chol;
    model.log_marginal = log_marginal_likelihood(model.theta, design, y);
    model.n_rows = design.rows();
    double t0 = std::numeric_limits<double>::infinity();
    double t1 = -std::numeric_limits<double>::infinity();
    for (const auto& entry : stack.entries) {
        model.entry_kinds.push_back(entry.series.kind());
        model.entry_groups.push_back(entry.noise_group);
        t0 = std::min(t0, entry.series.t()[0]);
        t1 = std::max(t1, entry.series.t()[entry.series.size() - 1]);
    }
    model.train_t0 = t0;
    model.train_t1 = t1;
    return model;
}

namespace {

// Conditions the given prediction basis on the cached weight posterior.
template <typename Posterior>
Posterior condition(const TrainedModel& model, const BasisMatrix& basis,
                    CovMode mode) {
    Posterior post;
    post.t = basis.t;
    post.mode = mode;
    post.mean = basis.values * model.weight_mean;

    // Sigma_pred = sigma_s2 * Psi_pred B^-1 Psi_pred^T through the cached
    // Cholesky factor of B.
    const Eigen::MatrixXd half =
        model.inner_chol.triangularView<Eigen::Lower>().solve(
            basis.values.transpose()); // K x Np
    if (mode == CovMode::Full) {
        post.cov.noalias() = model.theta.sigma_s2 *
                             (half.transpose() * half);
        post.cov = 0.5 * (post.cov + post.cov.transpose()).eval();
        post.variance = post.cov.diagonal();
    } else {
        post.variance = model.theta.sigma_s2 *
                        half.colwise().squaredNorm().transpose();
    }
    for (Eigen::Index i = 0; i < post.variance.size(); ++i) {
        if (post.variance[i] < 0.0) {
            post.variance[i] = 0.0;
            if (mode == CovMode::Full) post.cov(i, i) = 0.0;
            ++post.clipped_negative;
        }
    }
    return post;
}

} // namespace

ForcePosterior predict_force(const TrainedModel& model, const Oscillator& osc,
                             const Eigen::VectorXd& t_pred, CovMode mode) {
    if (!t_pred.allFinite())
        throw ValidationError("prediction times must be finite");
    const BasisMatrix basis = force_basis(t_pred, model.scales, osc);
    return condition<ForcePosterior>(model, basis, mode);
}

ResponsePosterior denoise_response(const TrainedModel& model, SignalKind kind,
                                   const Eigen::VectorXd& t_pred,
                                   CovMode mode) {
    if (!t_pred.allFinite())
        throw ValidationError("prediction times must be finite");
    const BasisMatrix basis = response_basis(t_pred, model.scales, kind);
    ResponsePosterior post = condition<ResponsePosterior>(model, basis, mode);
    post.kind = kind;
    return post;
}

std::vector<std::vector<TimeSeries>>
sample_prior(const SpectralScales& scales, const Hyperparameters& theta,
             const std::vector<SignalKind>& kinds, const Eigen::VectorXd& t,
             int n, std::uint64_t seed) {
    scales.validate();
    if (n < 1) throw ValidationError("sample count must be at least 1");
    if (kinds.empty()) throw ValidationError("no kinds requested");
    if (!(theta.sigma_s2 >= 0.0) || (theta.sigma_n2.array() < 0.0).any())
        throw ValidationError("variances must be non-negative");
    if (theta.sigma_n2.size() != static_cast<Eigen::Index>(kinds.size()) &&
        theta.sigma_n2.size() != 1)
        throw ValidationError(
            "sigma_n2 must have one entry per kind (or a single shared one)");

    std::vector<BasisMatrix> bases;
    bases.reserve(kinds.size());
    for (SignalKind kind : kinds) bases.push_back(response_basis(t, scales, kind));

    const double sigma_s = std::sqrt(theta.sigma_s2);
    const Eigen::Index k = 2 * scales.size();
    std::vector<std::vector<TimeSeries>> draws;
    draws.reserve(static_cast<size_t>(n));
    Rng rng(derive_seed(seed, "prior-sample"));
    for (int draw = 0; draw < n; ++draw) {
        Eigen::VectorXd w(k);
        for (Eigen::Index i = 0; i < k; ++i) w[i] = rng.normal();
        std::vector<TimeSeries> joint;
        joint.reserve(kinds.size());
        for (size_t ki = 0; ki < kinds.size(); ++ki) {
            const double sigma_n = std::sqrt(
                theta.sigma_n2.size() == 1
                    ? theta.sigma_n2[0]
                    : theta.sigma_n2[static_cast<Eigen::Index>(ki)]);
            Eigen::VectorXd x = sigma_s * (bases[ki].values * w);
            for (Eigen::Index i = 0; i < x.size(); ++i)
                x[i] += sigma_n * rng.normal();
            joint.emplace_back(t, std::move(x), kinds[ki]);
        }
        draws.push_back(std::move(joint));
    }
    return draws;
}

SpectralScales select_frequencies_union(const DatasetStack& stack,
                                        const CutoffRule& rule) {
    stack.validate();
    const auto& ref = stack.reference_entry();
    const Spectrum ref_spectrum = fft_magnitude(ref.series);

    std::set<Eigen::Index> kept;
    bool any_selected = false;
    for (const auto& entry : stack.entries) {
        const Spectrum spec = fft_magnitude(entry.series);
        if (spec.f.size() != ref_spectrum.f.size() ||
            (spec.f - ref_spectrum.f).cwiseAbs().maxCoeff() >
                1e-9 * ref_spectrum.f[ref_spectrum.f.size() - 1])
            throw ValidationError(
                "union selection requires a shared frequency bin grid");
        try {
            const SpectralScales sel = select_frequencies(spec, rule);
            any_selected = true;
            Eigen::Index pos = 0;
            for (Eigen::Index j = 0; j < sel.f.size(); ++j) {
                while (pos < spec.f.size() && spec.f[pos] < sel.f[j]) ++pos;
                kept.insert(pos);
            }
        } catch (const NoFrequenciesSelected&) {
            // Entries whose spectrum is too flat contribute nothing.
        }
    }
    if (!any_selected || kept.empty())
        throw NoFrequenciesSelected("no entry selected any frequency bins");

    SpectralScales scales;
    scales.f.resize(static_cast<Eigen::Index>(kept.size()));
    scales.lambda.resize(static_cast<Eigen::Index>(kept.size()));
    Eigen::Index out = 0;
    for (Eigen::Index idx : kept) {
        scales.f[out] = ref_spectrum.f[idx];
        scales.lambda[out] = ref_spectrum.magnitude[idx];
        ++out;
    }
    return to_displacement_scales(std::move(scales), ref.series.kind());
}

} // namespace loadrec
