// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace adatp {

/// What gamma_cap bounds the retained significant tokens against.
enum class CapMode {
    RetainedBudget,  // literal equation: r1 <= n / |S'| * gamma_cap * r
    VisualTokens,    // prose reading: r1 * |S'| <= min(gamma_cap * n, r * n)
};

std::string_view to_string(CapMode mode);
CapMode cap_mode_from_string(std::string_view s);

struct AdaTPConfig {
    double tau_s = 0.95;        // adjacent-frame cosine threshold for segment continuation
    double tau_t = 0.05;        // segment-text relevance threshold for significance
    double alpha_boost = 2.2;   // retention boost for significant segments
    double gamma_cap = 0.75;    // cap on the significant share
    double p = 1.0;             // compression knob; retains p*40% .. p*12%
    std::uint32_t start_layer = 2;
    std::uint32_t keep_last_layers = 12;
    CapMode cap_mode = CapMode::RetainedBudget;
    // When set, the trailing nonspatial positions of each frame are never deduplicated.
    bool exempt_nonspatial = false;

    /// Throws Error(InvalidConfig) on the first out-of-range field.
    void validate() const;

    friend bool operator==(const AdaTPConfig&, const AdaTPConfig&) = default;
};

}  // namespace adatp
