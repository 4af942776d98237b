// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0
//
// Text serialization of a PruneReport. Keys are emitted in a fixed order and
// doubles with shortest round-trip formatting, so identical reports produce
// identical bytes.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adatp/pipeline.hpp"

namespace adatp {

inline constexpr std::string_view kReportFormat = "adatp-prune-report";
inline constexpr int kReportVersion = 1;

std::string report_to_json(const PruneReport& report);

/// The subset of a report the FLOPs model needs.
struct ReportCounts {
    std::uint32_t n = 0;
    std::uint32_t c = 0;
    std::uint32_t num_layers = 0;
    std::vector<std::uint64_t> tokens_per_layer;
};

/// Throws MalformedReport on bad JSON, a wrong format tag, or inconsistent counts.
ReportCounts parse_report_counts(std::string_view text);

/// One line per visual token: "flat,frame,pos,kept" with kept in {0,1}.
std::string kept_mask_csv(const PruneReport& report);

}  // namespace adatp
