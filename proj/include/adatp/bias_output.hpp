// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adatp/bias_analyzer.hpp"

namespace adatp {

struct NamedBiasReport {
    std::string sample;
    BiasReport report;
};

inline constexpr std::string_view kCorpusMeanLabel = "mean";

/// Columns: sample,layer,end_fraction,head_fraction,peak_ratio,peak_pos. With more than one
/// sample, corpus-mean rows labelled "mean" follow the per-sample rows.
std::string bias_layers_csv(std::span<const NamedBiasReport> samples);

/// Position sums of every layer reshaped row-major into `grid_width` columns.
/// Columns: layer,row,col0..col{w-1}; a short final row leaves trailing cells empty.
std::string position_grid_csv(const BiasReport& report, std::uint32_t grid_width);

/// One `rect class="bar"` per frame.
std::string frame_bar_svg(std::span<const double> frame_sums, const std::string& title);

/// One `rect class="cell"` per position; the first maximal cell also carries class "peak".
std::string position_heat_svg(std::span<const double> position_sums, std::uint32_t grid_width,
                              const std::string& title);

}  // namespace adatp
