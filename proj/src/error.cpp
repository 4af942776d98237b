// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/error.hpp"

#include <fmt/format.h>

namespace adatp {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::TrailingData: return "TrailingData";
    case ErrorCode::InvalidHeader: return "InvalidHeader";
    case ErrorCode::MalformedMeta: return "MalformedMeta";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeAttention: return "NegativeAttention";
    case ErrorCode::ZeroNormVector: return "ZeroNormVector";
    case ErrorCode::ZeroNormFrame: return "ZeroNormFrame";
    case ErrorCode::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::TooFewLayers: return "TooFewLayers";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedReport: return "MalformedReport";
    case ErrorCode::MalformedTruth: return "MalformedTruth";
    }
    return "Unknown";
}

int exit_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::TooFewLayers:
    case ErrorCode::InfeasibleSpec:
        return 2;
    case ErrorCode::BadMagic:
    case ErrorCode::UnsupportedVersion:
    case ErrorCode::TruncatedPayload:
    case ErrorCode::TrailingData:
    case ErrorCode::InvalidHeader:
    case ErrorCode::MalformedMeta:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::NegativeAttention:
    case ErrorCode::ZeroNormVector:
    case ErrorCode::ZeroNormFrame:
    case ErrorCode::Io:
    case ErrorCode::MalformedReport:
    case ErrorCode::MalformedTruth:
        return 3;
    case ErrorCode::RangeOutOfBounds:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::EmptyInput:
    case ErrorCode::InvariantViolation:
        return 4;
    }
    return 4;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(fmt::format("{}: {}", to_string(code), what)),
      m_code(code) {}

}  // namespace adatp
