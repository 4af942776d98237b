// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/report_io.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "adatp/error.hpp"

namespace adatp {

using ojson = nlohmann::ordered_json;

namespace {

ojson config_json(const AdaTPConfig& cfg) {
    ojson j;
    j["tau_s"] = cfg.tau_s;
    j["tau_t"] = cfg.tau_t;
    j["alpha_boost"] = cfg.alpha_boost;
    j["gamma_cap"] = cfg.gamma_cap;
    j["p"] = cfg.p;
    j["start_layer"] = cfg.start_layer;
    j["keep_last_layers"] = cfg.keep_last_layers;
    j["cap_mode"] = to_string(cfg.cap_mode);
    j["exempt_nonspatial"] = cfg.exempt_nonspatial;
    return j;
}

ojson layer_json(const LayerRecord& rec) {
    const RetentionPlan& plan = rec.plan;
    ojson j;
    j["layer"] = rec.layer;
    j["rho"] = rec.rho;
    j["target"] = rec.target;
    j["case"] = to_string(plan.kind);
    j["r1"] = plan.r1;
    j["r2"] = plan.r2;
    j["raw_r1"] = plan.raw_r1;
    j["raw_r2"] = plan.raw_r2;
    j["r1_clamped"] = plan.r1_clamped;
    j["r2_clamped"] = plan.r2_clamped;
    j["shortfall_tokens"] = plan.shortfall_tokens;
    j["budgets"] = plan.budget;
    j["survivors_in"] = rec.survivors_in;
    j["selected"] = rec.selected;
    j["kept"] = rec.kept;
    j["budget_gap"] = rec.budget_gap;
    j["kept_flat"] = rec.kept_flat;
    return j;
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedReport, what); }

}  // namespace

std::string report_to_json(const PruneReport& report) {
    ojson j;
    j["format"] = kReportFormat;
    j["version"] = kReportVersion;
    j["n"] = report.n;
    j["c"] = report.c;
    j["num_layers"] = report.num_layers;
    j["nonspatial_count"] = report.nonspatial_count;
    j["config"] = config_json(report.config);

    ojson sched;
    sched["start_layer"] = report.schedule.start_layer;
    sched["stop_layer"] = report.schedule.stop_layer;
    sched["rho"] = report.schedule.rho;
    j["schedule"] = std::move(sched);

    ojson segs = ojson::array();
    for (std::size_t s = 0; s < report.segments.size(); ++s) {
        ojson seg;
        seg["id"] = report.segments[s].id;
        seg["start"] = report.segments[s].start;
        seg["len"] = report.segments[s].len;
        seg["relevance"] = report.segment_relevance[s];
        seg["significant"] = bool(report.significant[s]);
        segs.push_back(std::move(seg));
    }
    j["segments"] = std::move(segs);
    j["frame_sim"] = report.frame_sim;

    ojson layers = ojson::array();
    for (const auto& rec : report.layers) {
        layers.push_back(layer_json(rec));
    }
    j["layers"] = std::move(layers);
    j["tokens_per_layer"] = report.tokens_per_layer;
    j["final_kept"] = report.final_kept;

    ojson flops;
    flops["ratio"] = report.flops_ratio;
    flops["hidden"] = report.shape.hidden;
    flops["mlp_expansion"] = report.shape.mlp_expansion;
    flops["text_tokens"] = report.shape.text_tokens;
    j["flops"] = std::move(flops);
    return j.dump(2) + "\n";
}

ReportCounts parse_report_counts(std::string_view text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        malformed(fmt::format("not valid JSON ({})", e.what()));
    }
    const auto tag = j.is_object() ? j.find("format") : j.end();
    if (tag == j.end() || !tag->is_string() || tag->get<std::string>() != kReportFormat) {
        malformed(fmt::format("missing format tag \"{}\"", kReportFormat));
    }
    const auto version = j.find("version");
    if (version == j.end() || !version->is_number_integer() || version->get<int>() != kReportVersion) {
        malformed(fmt::format("unsupported report version {}", version == j.end() ? "(none)" : version->dump()));
    }
    ReportCounts out;
    try {
        out.n = j.at("n").get<std::uint32_t>();
        out.c = j.at("c").get<std::uint32_t>();
        out.num_layers = j.at("num_layers").get<std::uint32_t>();
        out.tokens_per_layer = j.at("tokens_per_layer").get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception& e) {
        malformed(fmt::format("bad count fields ({})", e.what()));
    }
    if (out.n == 0 || out.c == 0 || out.num_layers == 0) {
        malformed("n, c and num_layers must be positive");
    }
    if (out.tokens_per_layer.size() != out.num_layers) {
        malformed(fmt::format("{} per-layer counts for {} layers", out.tokens_per_layer.size(), out.num_layers));
    }
    const std::uint64_t total = std::uint64_t(out.n) * out.c;
    if (std::any_of(out.tokens_per_layer.begin(), out.tokens_per_layer.end(),
                    [&](std::uint64_t v) { return v > total; })) {
        malformed(fmt::format("a per-layer count exceeds n*c = {}", total));
    }
    return out;
}

std::string kept_mask_csv(const PruneReport& report) {
    std::vector<bool> kept(std::size_t(report.n) * report.c, false);
    for (std::uint32_t flat : report.final_kept) {
        kept[flat] = true;
    }
    std::string out = "flat,frame,pos,kept\n";
    for (std::size_t i = 0; i < kept.size(); ++i) {
        out += fmt::format("{},{},{},{}\n", i, i / report.c, i % report.c, kept[i] ? 1 : 0);
    }
    return out;
}

}  // namespace adatp
