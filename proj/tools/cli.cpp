// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "adatp/bias_analyzer.hpp"
#include "adatp/bias_output.hpp"
#include "adatp/dump_io.hpp"
#include "adatp/error.hpp"
#include "adatp/file_util.hpp"
#include "adatp/flops_model.hpp"
#include "adatp/pipeline.hpp"
#include "adatp/report_io.hpp"
#include "adatp/synth_bench.hpp"

namespace adatp {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kDumpExt = ".adtp";
constexpr std::string_view kTruthExt = ".truth";

struct ShapeFlags {
    std::uint64_t hidden = ModelShape{}.hidden;
    double mlp_expansion = ModelShape{}.mlp_expansion;
    std::uint64_t text_tokens = ModelShape{}.text_tokens;

    ModelShape shape() const {
        ModelShape s;
        s.hidden = hidden;
        s.mlp_expansion = mlp_expansion;
        s.text_tokens = text_tokens;
        return s;
    }
};

void add_config_flags(CLI::App* cmd, AdaTPConfig& cfg) {
    cmd->add_option("--tau-s", cfg.tau_s, "Adjacent-frame cosine threshold")->capture_default_str();
    cmd->add_option("--tau-t", cfg.tau_t, "Segment-text relevance threshold")->capture_default_str();
    cmd->add_option("--alpha-boost", cfg.alpha_boost, "Retention boost for significant segments")
        ->capture_default_str();
    cmd->add_option("--gamma-cap", cfg.gamma_cap, "Cap on the significant share")->capture_default_str();
    cmd->add_option("--p", cfg.p, "Compression knob")->capture_default_str();
    cmd->add_option("--start-layer", cfg.start_layer, "First pruning layer")->capture_default_str();
    cmd->add_option("--keep-last-layers", cfg.keep_last_layers, "Layers after the last pruning layer")
        ->capture_default_str();
    cmd->add_option_function<std::string>(
           "--cap-mode", [&cfg](const std::string& s) { cfg.cap_mode = cap_mode_from_string(s); },
           "retained-budget or visual-tokens")
        ->default_str(std::string(to_string(cfg.cap_mode)));
    cmd->add_flag("--exempt-nonspatial", cfg.exempt_nonspatial, "Never dedup the nonspatial positions");
}

void add_shape_flags(CLI::App* cmd, ShapeFlags& shape) {
    cmd->add_option("--hidden", shape.hidden, "Model hidden size")->capture_default_str();
    cmd->add_option("--mlp-expansion", shape.mlp_expansion, "MLP expansion factor")->capture_default_str();
    cmd->add_option("--text-tokens", shape.text_tokens, "Prompt text length")->capture_default_str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_file_atomic(path, text);
    }
}

void make_dirs(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::Io, fmt::format("{}: cannot create directory ({})", dir.string(), ec.message()));
    }
}

std::vector<fs::path> corpus_files(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw Error(ErrorCode::Io, fmt::format("{}: not a directory", dir.string()));
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == kDumpExt) {
            files.push_back(entry.path());
        }
    }
    if (ec) {
        throw Error(ErrorCode::Io, fmt::format("{}: {}", dir.string(), ec.message()));
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw Error(ErrorCode::EmptyInput, fmt::format("{}: no {} files", dir.string(), kDumpExt));
    }
    return files;
}

// gen ----------------------------------------------------------------------

struct GenArgs {
    SynthSpec spec;
    std::uint32_t count = 1;
    std::string out_dir;
    std::string prefix = "sample";
};

void add_gen(CLI::App& app, GenArgs& a) {
    auto* cmd = app.add_subcommand("gen", "Generate synthetic dumps with ground-truth sidecars");
    SynthSpec& s = a.spec;
    cmd->add_option("--frames", s.n, "Frames n")->capture_default_str();
    cmd->add_option("--tokens-per-frame", s.c, "Tokens per frame c")->capture_default_str();
    cmd->add_option("--dim", s.d, "Embedding dimension")->capture_default_str();
    cmd->add_option("--layers", s.num_layers, "Language-model layers")->capture_default_str();
    cmd->add_option("--nonspatial", s.nonspatial_count, "Trailing nonspatial positions per frame")
        ->capture_default_str();
    cmd->add_option("--segments", s.segments, "Equal-length segment count")->capture_default_str();
    cmd->add_option("--segment-lengths", s.segment_lengths, "Explicit segment lengths")->delimiter(',');
    cmd->add_option("--intra-noise", s.intra_noise, "Frame jitter around its segment direction")
        ->capture_default_str();
    cmd->add_option("--relevant-segments", s.relevant_segments, "Text-relevant segment ids (default: middle)")
        ->delimiter(',');
    cmd->add_option("--text-alignment", s.text_alignment, "Text/relevant cosine")->capture_default_str();
    cmd->add_option("--planted", s.planted_per_segment, "Planted tokens per relevant segment")
        ->capture_default_str();
    cmd->add_option("--beta", s.beta, "Score bonus on planted tokens")->capture_default_str();
    cmd->add_option("--noise", s.noise, "Uniform base score range")->capture_default_str();
    cmd->add_option("--end-mass", s.end_mass, "Top-q fraction in the last tail-k frames")->capture_default_str();
    cmd->add_option("--tail-k", s.tail_k, "Tail window in frames")->capture_default_str();
    cmd->add_option("--top-q", s.top_q, "Top fraction the end mass refers to")->capture_default_str();
    cmd->add_option("--edge-lift", s.edge_lift, "Score lift on head and tail windows")->capture_default_str();
    cmd->add_option("--peak-ratio", s.peak_ratio, "Biased position sum over mean position sum")
        ->capture_default_str();
    cmd->add_option("--bias-positions", s.bias_positions, "Biased spatial positions")->delimiter(',');
    cmd->add_option("--tau-s", s.tau_s, "Segmentation threshold the plan must survive")->capture_default_str();
    cmd->add_option("--tau-t", s.tau_t, "Relevance threshold the plan must survive")->capture_default_str();
    cmd->add_option("--seed", s.seed, "Seed of the first sample; sample i uses seed + i")->capture_default_str();
    cmd->add_option("--count", a.count, "Number of samples")->capture_default_str();
    cmd->add_option("--prefix", a.prefix, "File name prefix")->capture_default_str();
    cmd->add_option("--out", a.out_dir, "Output directory")->required();
}

int run_gen(const GenArgs& a, std::ostream& out) {
    if (a.count == 0) {
        throw Error(ErrorCode::InvalidConfig, "--count must be positive");
    }
    a.spec.validate();
    // Everything is generated before the first write so an infeasible seed leaves no partial corpus.
    std::vector<SynthSample> samples;
    for (std::uint32_t i = 0; i < a.count; ++i) {
        SynthSpec spec = a.spec;
        spec.seed = a.spec.seed + i;
        samples.push_back(generate(spec));
    }
    const fs::path dir(a.out_dir);
    make_dirs(dir);
    for (std::uint32_t i = 0; i < a.count; ++i) {
        const std::string stem = fmt::format("{}_{:05d}", a.prefix, i);
        write_dump_file(dir / (stem + std::string(kDumpExt)), samples[i].dump);
        write_file_atomic(dir / (stem + std::string(kTruthExt)), format_truth(samples[i].truth));
    }
    out << fmt::format("wrote {} samples to {}\n", a.count, dir.string());
    return 0;
}

// prune --------------------------------------------------------------------

struct PruneArgs {
    std::string dump;
    AdaTPConfig cfg;
    ShapeFlags shape;
    std::string out;
    std::string mask;
};

void add_prune(CLI::App& app, PruneArgs& a) {
    auto* cmd = app.add_subcommand("prune", "Run the pruning pipeline on one dump");
    cmd->add_option("dump", a.dump, "ADTP file")->required();
    add_config_flags(cmd, a.cfg);
    add_shape_flags(cmd, a.shape);
    cmd->add_option("--out", a.out, "Report path (default stdout)");
    cmd->add_option("--mask", a.mask, "Kept-token mask CSV path");
}

int run_prune(const PruneArgs& a, std::ostream& out) {
    a.cfg.validate();
    ModelShape shape = a.shape.shape();
    shape.validate();
    const AdtpDump dump = read_dump_file(a.dump);
    const PruneReport report = run(dump, a.cfg, shape);
    emit(a.out, report_to_json(report), out);
    if (!a.mask.empty()) {
        write_file_atomic(a.mask, kept_mask_csv(report));
    }
    return 0;
}

// analyze-bias -------------------------------------------------------------

struct AnalyzeArgs {
    std::vector<std::string> dumps;
    double top_q = 0.1;
    std::uint32_t tail_k = 4;
    std::uint32_t grid_width = 14;
    std::uint32_t plot_layer = 2;
    std::string out;
    std::string grid_out;
    std::string svg_dir;
};

void add_analyze(CLI::App& app, AnalyzeArgs& a) {
    auto* cmd = app.add_subcommand("analyze-bias", "Measure global and local attention bias");
    cmd->add_option("dumps", a.dumps, "ADTP files")->required();
    cmd->add_option("--top-q", a.top_q, "Top fraction of tokens examined")->capture_default_str();
    cmd->add_option("--tail-k", a.tail_k, "Head/tail window in frames")->capture_default_str();
    cmd->add_option("--grid-width", a.grid_width, "Columns of the spatial position grid")->capture_default_str();
    cmd->add_option("--plot-layer", a.plot_layer, "Layer rendered in the SVG plots")->capture_default_str();
    cmd->add_option("--out", a.out, "Per-layer CSV path (default stdout)");
    cmd->add_option("--grid-out", a.grid_out, "Position-sum grid CSV path");
    cmd->add_option("--svg-dir", a.svg_dir, "Directory for frames.svg and positions.svg");
}

int run_analyze(const AnalyzeArgs& a, std::ostream& out) {
    if (!(a.top_q > 0.0 && a.top_q <= 1.0) || a.tail_k == 0 || a.grid_width == 0) {
        throw Error(ErrorCode::InvalidConfig,
                    fmt::format("need 0 < --top-q <= 1, --tail-k >= 1 and --grid-width >= 1 (got {}, {}, {})",
                                a.top_q, a.tail_k, a.grid_width));
    }
    std::vector<NamedBiasReport> samples;
    for (const auto& path : a.dumps) {
        const AdtpDump dump = read_dump_file(path);
        samples.push_back({fs::path(path).stem().string(), analyze(dump, a.top_q, a.tail_k)});
    }
    std::vector<BiasReport> reports;
    for (const auto& s : samples) {
        reports.push_back(s.report);
    }
    const BiasReport mean = samples.size() > 1 ? corpus_mean(reports) : samples.front().report;

    emit(a.out, bias_layers_csv(samples), out);
    if (!a.grid_out.empty()) {
        write_file_atomic(a.grid_out, position_grid_csv(mean, a.grid_width));
    }
    if (!a.svg_dir.empty()) {
        if (a.plot_layer >= mean.size()) {
            throw Error(ErrorCode::RangeOutOfBounds,
                        fmt::format("--plot-layer {} but the dumps have {} layers", a.plot_layer, mean.size()));
        }
        const LayerBias& lb = mean[a.plot_layer];
        const fs::path dir(a.svg_dir);
        make_dirs(dir);
        write_file_atomic(dir / "frames.svg",
                          frame_bar_svg(lb.frame_sums, fmt::format("attention per frame, layer {}", lb.layer)));
        write_file_atomic(dir / "positions.svg",
                          position_heat_svg(lb.local.position_sums, a.grid_width,
                                            fmt::format("attention per spatial position, layer {}", lb.layer)));
    }
    return 0;
}

// compare ------------------------------------------------------------------

struct CompareArgs {
    std::string dir;
    AdaTPConfig cfg;
    ShapeFlags shape;
    std::vector<std::string> methods = {"adatp", "fastv", "random"};
    std::uint32_t fastv_layer = 2;
    std::uint64_t seed = 0;
    std::string out;
};

void add_compare(CLI::App& app, CompareArgs& a) {
    auto* cmd = app.add_subcommand("compare", "Planted-token recall of each pruner at matched retention");
    cmd->add_option("corpus", a.dir, "Directory of .adtp files with .truth sidecars")->required();
    add_config_flags(cmd, a.cfg);
    add_shape_flags(cmd, a.shape);
    cmd->add_option("--methods", a.methods, "Subset of adatp,fastv,random")->delimiter(',')->capture_default_str();
    cmd->add_option("--fastv-layer", a.fastv_layer, "Layer whose scores guide the FastV baseline")
        ->capture_default_str();
    cmd->add_option("--seed", a.seed, "Random baseline seed")->capture_default_str();
    cmd->add_option("--out", a.out, "CSV path (default stdout)");
}

int run_compare(const CompareArgs& a, std::ostream& out) {
    a.cfg.validate();
    ModelShape shape = a.shape.shape();
    shape.validate();
    CompareOptions opts;
    opts.methods.clear();
    for (const auto& m : a.methods) {
        const Method method = method_from_string(m);
        if (std::find(opts.methods.begin(), opts.methods.end(), method) == opts.methods.end()) {
            opts.methods.push_back(method);
        }
    }
    opts.fastv_layer = a.fastv_layer;
    opts.random_seed = a.seed;
    opts.shape = shape;

    std::vector<SynthSample> corpus;
    for (const auto& path : corpus_files(a.dir)) {
        fs::path truth = path;
        truth.replace_extension(kTruthExt);
        SynthSample s;
        s.dump = read_dump_file(path);
        s.truth = parse_truth(read_file_text(truth));
        if (s.truth.empty()) {
            throw Error(ErrorCode::MalformedTruth, fmt::format("{}: empty ground truth", truth.string()));
        }
        if (s.truth.back() >= s.dump.token_count()) {
            throw Error(ErrorCode::MalformedTruth, fmt::format("{}: index {} outside n*c = {}", truth.string(),
                                                               s.truth.back(), s.dump.token_count()));
        }
        corpus.push_back(std::move(s));
    }

    const RecallResult result = compare(corpus, a.cfg, opts);
    std::string csv = "method,retention,mean_recall,std,flops_ratio\n";
    for (const auto& r : result.methods) {
        csv += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f}\n", to_string(r.method), r.mean_retention, r.mean_recall,
                           r.std_recall, r.mean_flops_ratio);
    }
    emit(a.out, csv, out);
    return 0;
}

// flops --------------------------------------------------------------------

struct FlopsArgs {
    std::string report;
    ShapeFlags shape;
};

void add_flops(CLI::App& app, FlopsArgs& a) {
    auto* cmd = app.add_subcommand("flops", "Pruned-to-vanilla FLOPs ratio of a prune report");
    cmd->add_option("report", a.report, "JSON report written by prune")->required();
    add_shape_flags(cmd, a.shape);
}

int run_flops(const FlopsArgs& a, std::ostream& out) {
    ModelShape shape = a.shape.shape();
    shape.validate();
    const ReportCounts counts = parse_report_counts(read_file_text(a.report));
    shape.num_layers = counts.num_layers;
    shape.visual_tokens = std::uint64_t(counts.n) * counts.c;
    out << fmt::format("{:.4f}\n", flops_ratio(counts.tokens_per_layer, shape));
    return 0;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Attention-debiased visual token pruning engine", "adatp"};
    app.require_subcommand(1);

    GenArgs gen;
    PruneArgs prune;
    AnalyzeArgs analyze_args;
    CompareArgs compare_args;
    FlopsArgs flops;
    add_gen(app, gen);
    add_prune(app, prune);
    add_analyze(app, analyze_args);
    add_compare(app, compare_args);
    add_flops(app, flops);

    std::vector<const char*> argv;
    if (args.empty()) {
        argv.push_back("adatp");
    }
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "gen") {
            return run_gen(gen, out);
        }
        if (name == "prune") {
            return run_prune(prune, out);
        }
        if (name == "analyze-bias") {
            return run_analyze(analyze_args, out);
        }
        if (name == "compare") {
            return run_compare(compare_args, out);
        }
        return run_flops(flops, out);
    } catch (const Error& e) {
        err << "adatp: " << e.what() << "\n";
        return exit_status(e.code());
    } catch (const std::exception& e) {
        err << "adatp: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace adatp
