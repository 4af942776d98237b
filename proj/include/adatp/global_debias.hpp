// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0
//
// Global debiasing: segments whose mean frame-text cosine exceeds tau_t are
// "significant" and receive a boosted share r1 of the layer's retention ratio;
// the remaining segments share what is left at r2.
//
//   r1 = min(alpha_boost, n / sum_{s in S'} |s| * gamma_cap) * r
//   r2 = (r * n - r1 * sum_{s in S'} |s|) / sum_{s not in S'} |s|

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adatp/config.hpp"
#include "adatp/dump_io.hpp"
#include "adatp/segmenter.hpp"

namespace adatp {

struct FrameRelevance {
    std::vector<double> frame_sim;  // cosine of each pooled frame embedding with the text embedding
};

/// Throws ZeroNormVector if any frame or the text embedding is zero.
FrameRelevance frame_relevance(const AdtpDump& dump);

/// Arithmetic mean of frame_sim over each segment's frames.
std::vector<double> segment_relevance(const FrameRelevance& rel, std::span<const Segment> segs);

/// Membership in S': mean relevance strictly greater than tau_t.
std::vector<bool> select_significant(const FrameRelevance& rel, std::span<const Segment> segs, double tau_t);

enum class PlanCase {
    Mixed,            // S' is a proper nonempty subset of S
    NoneSignificant,  // S' empty: every segment gets r
    AllSignificant,   // S' == S: boost impossible, every segment gets r
};

std::string_view to_string(PlanCase kind);

struct RetentionPlan {
    double r = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    // Unclamped values: r1 before clamping to 1, r2 before clamping to 1.
    double raw_r1 = 0.0;
    double raw_r2 = 0.0;
    bool r1_clamped = false;
    bool r2_clamped = false;
    // Budget that could not be placed once both ratios hit 1, in tokens.
    double shortfall_tokens = 0.0;
    PlanCase kind = PlanCase::NoneSignificant;
    CapMode cap_mode = CapMode::RetainedBudget;
    std::vector<bool> significant;
    std::vector<std::uint64_t> budget;  // max(1, floor(ratio_s * |s| * c)) per segment

    double ratio_for(std::size_t segment) const { return significant[segment] ? r1 : r2; }
};

/// Tolerance added before flooring fractional token budgets so products such as
/// 0.15 * 24 * c that are integral in exact arithmetic do not lose a token.
inline constexpr double kBudgetFloorEps = 1e-9;

std::uint64_t token_budget(double ratio, std::uint32_t frames, std::uint32_t c);

RetentionPlan allocate(std::span<const Segment> segs, const std::vector<bool>& significant, const AdaTPConfig& cfg,
                       double r, std::uint32_t c);

}  // namespace adatp
