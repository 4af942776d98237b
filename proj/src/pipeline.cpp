// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "adatp/error.hpp"

namespace adatp {

PruneSchedule schedule(const AdaTPConfig& cfg, std::uint32_t num_layers) {
    cfg.validate();
    if (num_layers <= cfg.start_layer + cfg.keep_last_layers) {
        throw Error(ErrorCode::TooFewLayers,
                    fmt::format("{} layers leave no pruning range (start {}, last {} kept)", num_layers,
                                cfg.start_layer, cfg.keep_last_layers));
    }
    PruneSchedule s;
    s.num_layers = num_layers;
    s.start_layer = cfg.start_layer;
    s.stop_layer = num_layers - cfg.keep_last_layers;
    s.rho_start = kRhoStartPerP * cfg.p;
    s.rho_end = kRhoEndPerP * cfg.p;
    s.rho.resize(num_layers);
    const double span = static_cast<double>(s.stop_layer - s.start_layer);
    for (std::uint32_t l = 0; l < num_layers; ++l) {
        double rho;
        if (l <= s.start_layer) {
            rho = s.rho_start;
        } else if (l >= s.stop_layer) {
            rho = s.rho_end;
        } else {
            rho = s.rho_start + (s.rho_end - s.rho_start) * static_cast<double>(l - s.start_layer) / span;
        }
        s.rho[l] = std::min(1.0, rho);
    }
    return s;
}

std::uint64_t PruneState::count() const {
    std::uint64_t total = 0;
    for (const auto& seg : survivors) {
        total += seg.size();
    }
    return total;
}

PruneState initial_state(const AdtpDump& dump, const std::vector<Segment>& segs) {
    PruneState state;
    state.survivors.resize(segs.size());
    for (std::size_t s = 0; s < segs.size(); ++s) {
        auto& out = state.survivors[s];
        out.reserve(std::size_t(segs[s].len) * dump.c);
        for (std::uint32_t flat = segs[s].start * dump.c; flat < segs[s].end() * dump.c; ++flat) {
            out.push_back(flat);
        }
    }
    return state;
}

LayerRecord prune_layer(PruneState& state, const AdtpDump& dump, const std::vector<Segment>& segs,
                        const RetentionPlan& plan, std::uint32_t layer, const DedupOptions& dedup_opts) {
    if (layer >= dump.num_layers) {
        throw Error(ErrorCode::RangeOutOfBounds,
                    fmt::format("layer {} has no score vector ({} layers)", layer, dump.num_layers));
    }
    const auto scores = dump.layer_scores(layer);

    LayerRecord rec;
    rec.layer = layer;
    rec.rho = plan.r;
    rec.target = static_cast<std::uint64_t>(std::floor(plan.r * double(dump.token_count()) + kBudgetFloorEps));
    rec.plan = plan;
    rec.survivors_in = state.count();

    std::vector<ScoredToken> pool;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        auto& survivors = state.survivors[s];
        pool.clear();
        for (std::uint32_t flat : survivors) {
            pool.push_back({unflatten(flat, dump.c), scores[flat]});
        }
        const auto budget = static_cast<std::size_t>(std::min<std::uint64_t>(plan.budget[s], pool.size()));
        std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(budget), pool.end(), scan_before);
        pool.resize(budget);
        rec.selected += budget;

        const auto kept = dedup(pool, dedup_opts);
        survivors.clear();
        for (const auto& t : kept) {
            survivors.push_back(flatten(t.id, dump.c));
        }
        std::sort(survivors.begin(), survivors.end());
    }

    for (const auto& seg : state.survivors) {
        rec.kept_flat.insert(rec.kept_flat.end(), seg.begin(), seg.end());
    }
    std::sort(rec.kept_flat.begin(), rec.kept_flat.end());
    rec.kept = rec.kept_flat.size();
    rec.budget_gap = rec.target > rec.kept ? rec.target - rec.kept : 0;
    state.layer = layer + 1;
    return rec;
}

PruneReport run(const AdtpDump& dump, const AdaTPConfig& cfg, const ModelShape& shape_template) {
    validate(dump);
    cfg.validate();

    PruneReport report;
    report.n = dump.n;
    report.c = dump.c;
    report.num_layers = dump.num_layers;
    report.nonspatial_count = dump.nonspatial_count;
    report.config = cfg;
    report.schedule = schedule(cfg, dump.num_layers);

    report.segments = partition(dump.frame_embeddings, dump.d, cfg.tau_s);
    const FrameRelevance rel = frame_relevance(dump);
    report.frame_sim = rel.frame_sim;
    report.segment_relevance = segment_relevance(rel, report.segments);
    report.significant = select_significant(rel, report.segments, cfg.tau_t);

    DedupOptions dedup_opts;
    if (cfg.exempt_nonspatial && dump.nonspatial_count > 0) {
        dedup_opts.exempt_from_pos = dump.c - dump.nonspatial_count;
    }

    PruneState state = initial_state(dump, report.segments);
    const std::uint64_t total = dump.token_count();
    report.tokens_per_layer.assign(dump.num_layers, total);

    std::uint64_t current = total;
    for (std::uint32_t l = 0; l < dump.num_layers; ++l) {
        report.tokens_per_layer[l] = current;
        if (!report.schedule.prunes_at(l)) {
            continue;
        }
        const RetentionPlan plan =
            allocate(report.segments, report.significant, cfg, report.schedule.rho[l], dump.c);
        report.layers.push_back(prune_layer(state, dump, report.segments, plan, l, dedup_opts));
        current = report.layers.back().kept;
    }
    report.final_kept = report.layers.empty() ? std::vector<std::uint32_t>{} : report.layers.back().kept_flat;

    report.shape = shape_template;
    report.shape.num_layers = dump.num_layers;
    report.shape.visual_tokens = total;
    report.flops_ratio = ratio(report, report.shape);
    return report;
}

}  // namespace adatp
