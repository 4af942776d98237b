// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0
//
// Analytic decoder-layer cost:
//   (4 + 4e) * L * d^2   projections (QKV + output) and the two MLP matmuls
//   + 2 * L^2 * d        attention scores and the weighted sum of values
// Embedding, norms, softmax and the vocabulary head are omitted; only the
// pruned-to-vanilla ratio is reported.

#pragma once

#include <cstdint>
#include <span>

namespace adatp {

struct PruneReport;

struct ModelShape {
    std::uint32_t num_layers = 28;
    std::uint64_t hidden = 3584;
    double mlp_expansion = 4.0;
    std::uint64_t text_tokens = 64;
    std::uint64_t visual_tokens = 32 * 196;

    void validate() const;
};

/// FLOPs of one decoder layer over a sequence of `tokens`. Throws InvalidConfig for tokens == 0.
double layer_flops(std::uint64_t tokens, const ModelShape& shape);

/// sum_l layer_flops(t + visual[l]) / sum_l layer_flops(t + visual_tokens).
double flops_ratio(std::span<const std::uint64_t> visual_per_layer, const ModelShape& shape);

/// Throws ShapeMismatch when the report's layer count or token count disagrees with `shape`.
double ratio(const PruneReport& report, const ModelShape& shape);

}  // namespace adatp
