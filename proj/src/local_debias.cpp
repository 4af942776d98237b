// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/local_debias.hpp"

#include <algorithm>
#include <unordered_set>

namespace adatp {

std::vector<ScoredToken> dedup(std::span<const ScoredToken> tokens, const DedupOptions& opts) {
    std::vector<ScoredToken> sorted(tokens.begin(), tokens.end());
    std::sort(sorted.begin(), sorted.end(), scan_before);

    std::unordered_set<std::uint32_t> used;
    used.reserve(sorted.size());
    std::vector<ScoredToken> kept;
    kept.reserve(sorted.size());
    for (const auto& t : sorted) {
        if (t.id.pos >= opts.exempt_from_pos || used.insert(t.id.pos).second) {
            kept.push_back(t);
        }
    }
    return kept;
}

}  // namespace adatp
