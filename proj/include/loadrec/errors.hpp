// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#pragma once

#include <stdexcept>
#include <string>

namespace loadrec {

/// Base class of all loadrec errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent inputs and configuration. CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (factorization breakdown, failed optimisation, rank
/// deficiency). CLI maps this to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NonUniformSampling : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InsufficientLength : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class FrequencyOutOfRange : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NoFrequenciesSelected : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateModeShapes : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NumericalBreakdown : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitFailed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace loadrec
