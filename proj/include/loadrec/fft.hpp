// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

namespace loadrec::fft {

/// Unnormalized forward real-to-complex DFT; returns n/2 + 1 coefficients.
std::vector<std::complex<double>> rfft(const Eigen::VectorXd& x);

/// Unnormalized forward (inverse = false) or normalized-by-1/n inverse
/// complex transform, in place.
void transform(std::vector<std::complex<double>>& data, bool inverse);

} // namespace loadrec::fft
