// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/global_debias.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "adatp/error.hpp"
#include "adatp/kernels.hpp"

namespace adatp {

FrameRelevance frame_relevance(const AdtpDump& dump) {
    FrameRelevance rel;
    rel.frame_sim.resize(dump.n);
    kernels::row_cosines_parallel(dump.frame_embeddings, dump.d, dump.text_embedding, rel.frame_sim);
    for (std::size_t i = 0; i < rel.frame_sim.size(); ++i) {
        if (std::isnan(rel.frame_sim[i])) {
            throw Error(ErrorCode::ZeroNormVector,
                        fmt::format("frame {} or the text embedding has zero norm", i));
        }
    }
    return rel;
}

std::vector<double> segment_relevance(const FrameRelevance& rel, std::span<const Segment> segs) {
    std::vector<double> means;
    means.reserve(segs.size());
    for (const auto& s : segs) {
        if (s.end() > rel.frame_sim.size()) {
            throw Error(ErrorCode::RangeOutOfBounds,
                        fmt::format("segment [{}, {}) exceeds {} frames", s.start, s.end(), rel.frame_sim.size()));
        }
        double acc = 0.0;
        for (std::uint32_t f = s.start; f < s.end(); ++f) {
            acc += rel.frame_sim[f];
        }
        means.push_back(acc / s.len);
    }
    return means;
}

std::vector<bool> select_significant(const FrameRelevance& rel, std::span<const Segment> segs, double tau_t) {
    const auto means = segment_relevance(rel, segs);
    std::vector<bool> flags(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) {
        flags[i] = means[i] > tau_t;
    }
    return flags;
}

std::string_view to_string(PlanCase kind) {
    switch (kind) {
    case PlanCase::Mixed: return "mixed";
    case PlanCase::NoneSignificant: return "none-significant";
    case PlanCase::AllSignificant: return "all-significant";
    }
    return "unknown";
}

std::uint64_t token_budget(double ratio, std::uint32_t frames, std::uint32_t c) {
    const std::uint64_t available = std::uint64_t(frames) * c;
    const double raw = std::floor(ratio * frames * c + kBudgetFloorEps);
    const auto tokens = raw <= 0.0 ? std::uint64_t{0} : static_cast<std::uint64_t>(raw);
    return std::clamp<std::uint64_t>(tokens, 1, available);
}

RetentionPlan allocate(std::span<const Segment> segs, const std::vector<bool>& significant, const AdaTPConfig& cfg,
                       double r, std::uint32_t c) {
    if (segs.empty()) {
        throw Error(ErrorCode::EmptyInput, "allocate needs at least one segment");
    }
    if (significant.size() != segs.size()) {
        throw Error(ErrorCode::ShapeMismatch,
                    fmt::format("{} significance flags for {} segments", significant.size(), segs.size()));
    }
    if (!(r > 0.0 && r <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, fmt::format("retention ratio r = {} must be in (0, 1]", r));
    }

    double total = 0.0;
    double sig = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        total += segs[i].len;
        if (significant[i]) {
            sig += segs[i].len;
        }
    }
    const double rest = total - sig;

    RetentionPlan plan;
    plan.r = r;
    plan.cap_mode = cfg.cap_mode;
    plan.significant = significant;

    if (sig == 0.0 || rest == 0.0) {
        plan.kind = sig == 0.0 ? PlanCase::NoneSignificant : PlanCase::AllSignificant;
        plan.r1 = plan.r2 = plan.raw_r1 = plan.raw_r2 = r;
    } else {
        plan.kind = PlanCase::Mixed;
        if (cfg.cap_mode == CapMode::RetainedBudget) {
            plan.raw_r1 = std::min(cfg.alpha_boost, total / sig * cfg.gamma_cap) * r;
        } else {
            // The prose cap does not scale with r, so the significant share is also held to the whole budget.
            plan.raw_r1 = std::min({cfg.alpha_boost * r, total / sig * cfg.gamma_cap, r * total / sig});
        }
        plan.r1 = plan.raw_r1;
        if (plan.r1 > 1.0) {
            plan.r1 = 1.0;
            plan.r1_clamped = true;
        }
        plan.raw_r2 = (r * total - plan.r1 * sig) / rest;
        plan.r2 = std::max(0.0, plan.raw_r2);
        if (plan.r2 > 1.0) {
            plan.r2 = 1.0;
            plan.r2_clamped = true;
            plan.shortfall_tokens = (r * total - (plan.r1 * sig + plan.r2 * rest)) * c;
        }
    }

    plan.budget.reserve(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        plan.budget.push_back(token_budget(plan.ratio_for(i), segs[i].len, c));
    }
    return plan;
}

}  // namespace adatp
