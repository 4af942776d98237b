// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adatp {

enum class ErrorCode {
    // container format
    BadMagic,
    UnsupportedVersion,
    TruncatedPayload,
    TrailingData,
    InvalidHeader,
    MalformedMeta,
    NonFiniteValue,
    NegativeAttention,
    // numeric preconditions on dump content
    ZeroNormVector,
    ZeroNormFrame,
    // caller-supplied ranges and shapes
    RangeOutOfBounds,
    ShapeMismatch,
    EmptyInput,
    InvariantViolation,
    // configuration
    InvalidConfig,
    TooFewLayers,
    InfeasibleSpec,
    // files
    Io,
    MalformedReport,
    MalformedTruth,
};

std::string_view to_string(ErrorCode code);

/// Process exit status class used by the CLI: 2 flag validation, 3 input format, 4 internal invariant.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

}  // namespace adatp
