// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0
//
// Measures the two attention biases on a score vector:
//  - global: how many of the top-q tokens sit in the first / last k frames;
//  - local: how far the strongest within-frame position's summed attention
//    exceeds the mean position's.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adatp/dump_io.hpp"

namespace adatp {

struct GlobalBias {
    std::uint64_t top_count = 0;  // ceil(q * n * c)
    double end_fraction = 0.0;    // share of top tokens with frame >= n - k
    double head_fraction = 0.0;   // share of top tokens with frame < k
};

/// Top-q membership ties go to the lower flat index.
GlobalBias global_bias(std::span<const float> scores, std::uint32_t n, std::uint32_t c, double q, std::uint32_t k);

struct LocalBias {
    std::vector<double> position_sums;  // length c
    double peak_ratio = 1.0;            // max / mean of position_sums; 1 when all sums are zero
    std::uint32_t peak_pos = 0;         // lowest position attaining the max
};

LocalBias local_bias(std::span<const float> scores, std::uint32_t n, std::uint32_t c);
LocalBias local_bias_from_sums(std::vector<double> position_sums);

struct LayerBias {
    std::uint32_t layer = 0;
    GlobalBias global;
    LocalBias local;
    std::vector<double> frame_sums;  // length n
};

using BiasReport = std::vector<LayerBias>;

BiasReport analyze(const AdtpDump& dump, double q, std::uint32_t k);

/// Per-layer corpus mean: fractions and frame/position sums are averaged over samples, and the
/// peak metrics are recomputed from the mean position sums. Throws ShapeMismatch on mixed shapes.
BiasReport corpus_mean(std::span<const BiasReport> reports);

}  // namespace adatp
