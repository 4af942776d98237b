// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0
//
// Progressive layer-by-layer pruning. Scores produced by layer l (the dump's
// attention vector l) decide which visual tokens enter layer l + 1. Between
// start_layer and stop_layer = N - keep_last_layers the retained fraction of
// the ORIGINAL n*c tokens falls linearly from 0.40p to 0.12p.

#pragma once

#include <cstdint>
#include <vector>

#include "adatp/config.hpp"
#include "adatp/dump_io.hpp"
#include "adatp/flops_model.hpp"
#include "adatp/global_debias.hpp"
#include "adatp/local_debias.hpp"
#include "adatp/segmenter.hpp"

namespace adatp {

inline constexpr double kRhoStartPerP = 0.40;
inline constexpr double kRhoEndPerP = 0.12;

struct PruneSchedule {
    std::uint32_t num_layers = 0;
    std::uint32_t start_layer = 0;
    std::uint32_t stop_layer = 0;
    double rho_start = 0.0;  // unclamped 0.40p
    double rho_end = 0.0;    // unclamped 0.12p
    std::vector<double> rho;  // per layer, clamped to <= 1

    bool prunes_at(std::uint32_t layer) const { return layer >= start_layer && layer <= stop_layer; }
};

/// Throws TooFewLayers unless start_layer < N - keep_last_layers.
PruneSchedule schedule(const AdaTPConfig& cfg, std::uint32_t num_layers);

/// Surviving tokens of each segment as ascending flat indices.
struct PruneState {
    std::uint32_t layer = 0;
    std::vector<std::vector<std::uint32_t>> survivors;

    std::uint64_t count() const;
};

PruneState initial_state(const AdtpDump& dump, const std::vector<Segment>& segs);

struct LayerRecord {
    std::uint32_t layer = 0;
    double rho = 0.0;
    std::uint64_t target = 0;        // floor(rho * n * c)
    RetentionPlan plan;
    std::uint64_t survivors_in = 0;
    std::uint64_t selected = 0;      // after per-segment top-k, before dedup
    std::uint64_t kept = 0;          // after dedup
    std::uint64_t budget_gap = 0;    // max(0, target - kept); dedup losses are not backfilled
    std::vector<std::uint32_t> kept_flat;
};

/// Selects each segment's budget of highest-scoring survivors under `scores`, then dedups
/// each segment. Tokens only ever compete with survivors of their own segment.
LayerRecord prune_layer(PruneState& state, const AdtpDump& dump, const std::vector<Segment>& segs,
                        const RetentionPlan& plan, std::uint32_t layer, const DedupOptions& dedup_opts);

struct PruneReport {
    std::uint32_t n = 0;
    std::uint32_t c = 0;
    std::uint32_t num_layers = 0;
    std::uint32_t nonspatial_count = 0;
    AdaTPConfig config;
    ModelShape shape;
    std::vector<double> frame_sim;
    std::vector<Segment> segments;
    std::vector<double> segment_relevance;
    std::vector<bool> significant;
    PruneSchedule schedule;
    std::vector<LayerRecord> layers;              // one per pruning layer
    std::vector<std::uint64_t> tokens_per_layer;  // visual tokens entering each of the N layers
    std::vector<std::uint32_t> final_kept;
    double flops_ratio = 1.0;
};

/// `shape_template` supplies hidden size, MLP expansion and text length for the FLOPs ratio;
/// its layer and token counts are taken from the dump.
PruneReport run(const AdtpDump& dump, const AdaTPConfig& cfg, const ModelShape& shape_template = {});

}  // namespace adatp
