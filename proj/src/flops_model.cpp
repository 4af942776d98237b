// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/flops_model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "adatp/error.hpp"
#include "adatp/pipeline.hpp"

namespace adatp {

void ModelShape::validate() const {
    if (num_layers == 0 || hidden == 0 || visual_tokens == 0 || !(mlp_expansion > 0.0) ||
        !std::isfinite(mlp_expansion)) {
        throw Error(ErrorCode::InvalidConfig,
                    fmt::format("model shape needs positive fields (layers={}, hidden={}, e={}, visual={})",
                                num_layers, hidden, mlp_expansion, visual_tokens));
    }
}

double layer_flops(std::uint64_t tokens, const ModelShape& shape) {
    if (tokens == 0) {
        throw Error(ErrorCode::InvalidConfig, "layer_flops needs at least one token");
    }
    const double L = static_cast<double>(tokens);
    const double d = static_cast<double>(shape.hidden);
    return (4.0 + 4.0 * shape.mlp_expansion) * L * d * d + 2.0 * L * L * d;
}

double flops_ratio(std::span<const std::uint64_t> visual_per_layer, const ModelShape& shape) {
    shape.validate();
    if (visual_per_layer.size() != shape.num_layers) {
        throw Error(ErrorCode::ShapeMismatch, fmt::format("{} per-layer counts for a {}-layer model",
                                                          visual_per_layer.size(), shape.num_layers));
    }
    const double vanilla_layer = layer_flops(shape.text_tokens + shape.visual_tokens, shape);
    double pruned = 0.0;
    double vanilla = 0.0;
    for (std::size_t l = 0; l < visual_per_layer.size(); ++l) {
        vanilla += vanilla_layer;
        if (visual_per_layer[l] > shape.visual_tokens) {
            throw Error(ErrorCode::ShapeMismatch, fmt::format("layer {} carries {} visual tokens, more than {}", l,
                                                              visual_per_layer[l], shape.visual_tokens));
        }
        pruned += layer_flops(shape.text_tokens + visual_per_layer[l], shape);
    }
    return pruned / vanilla;
}

double ratio(const PruneReport& report, const ModelShape& shape) {
    if (std::uint64_t(report.n) * report.c != shape.visual_tokens) {
        throw Error(ErrorCode::ShapeMismatch, fmt::format("report has {} visual tokens, shape has {}",
                                                          std::uint64_t(report.n) * report.c, shape.visual_tokens));
    }
    return flops_ratio(report.tokens_per_layer, shape);
}

}  // namespace adatp
