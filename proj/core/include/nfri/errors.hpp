// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <stdexcept>
#include <string>

namespace nfri {

/// Base class for all recoverable toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The sampling kernel does not satisfy the alias-cancellation conditions
/// for the requested model order.
class AliasingError : public Error {
public:
    using Error::Error;
};

/// The pulse spectrum vanishes on a harmonic line needed for recovery,
/// so that line carries no information about the signal.
class KernelNullsSignal : public Error {
public:
    using Error::Error;
};

/// An operation that needs at least two time points got fewer.
class TooFewEvents : public Error {
public:
    using Error::Error;
};

/// The signal has (numerically) zero dynamic range; no threshold exists
/// that produces events.
class DegenerateSignal : public Error {
public:
    using Error::Error;
};

/// The nullspace of the annihilation system is not one-dimensional: the
/// data are inconsistent with the requested model order K.
class ModelOrderMismatch : public Error {
public:
    using Error::Error;
};

/// Event times passed to a Vandermonde builder are not strictly increasing.
class DuplicateTimes : public Error {
public:
    using Error::Error;
};

/// A single channel produced fewer than 2K+1 events.
class InsufficientEvents : public Error {
public:
    using Error::Error;
};

/// The stacked multichannel system has fewer than 2K+1 rows in total.
class InsufficientTotalEvents : public Error {
public:
    using Error::Error;
};

/// Two channels of a SIMO bank share the same temporal contrast threshold.
class DuplicateThresholds : public Error {
public:
    using Error::Error;
};

/// A joint filter fails to annihilate some channel while the per-channel
/// filters succeed individually: the channels do not share a support.
class NoCommonSupport : public Error {
public:
    using Error::Error;
};

/// A quantity that must be real carries a non-negligible imaginary part.
class NumericalInconsistency : public Error {
public:
    using Error::Error;
};

/// Scenario configuration failed schema validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace nfri
