// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "adatp/dump_io.hpp"

namespace adatp {

struct ScoredToken {
    TokenId id;
    float score = 0.0f;

    friend bool operator==(const ScoredToken&, const ScoredToken&) = default;
};

/// Scan order shared by selection and dedup: score descending, then frame ascending, then pos ascending.
inline bool scan_before(const ScoredToken& a, const ScoredToken& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    if (a.id.frame != b.id.frame) {
        return a.id.frame < b.id.frame;
    }
    return a.id.pos < b.id.pos;
}

struct DedupOptions {
    // Positions >= this value are never treated as duplicates.
    std::uint32_t exempt_from_pos = std::numeric_limits<std::uint32_t>::max();
};

/// Keeps the first token of each spatial position in scan order; the result is in scan order.
std::vector<ScoredToken> dedup(std::span<const ScoredToken> tokens, const DedupOptions& opts = {});

}  // namespace adatp
