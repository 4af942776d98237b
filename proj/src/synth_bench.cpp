// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/synth_bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "adatp/error.hpp"
#include "adatp/global_debias.hpp"
#include "adatp/pipeline.hpp"
#include "adatp/segmenter.hpp"

namespace adatp {

namespace {

constexpr int kMaxEmbeddingAttempts = 32;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }
[[noreturn]] void infeasible(const std::string& what) { throw Error(ErrorCode::InfeasibleSpec, what); }

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

bool normalize(Vec& v) {
    const double norm = std::sqrt(dot(v, v));
    if (norm < 1e-12) {
        return false;
    }
    for (auto& x : v) {
        x /= norm;
    }
    return true;
}

// Removes the components of v along the orthonormal `basis`.
void project_out(Vec& v, const std::vector<Vec>& basis) {
    for (const auto& q : basis) {
        const double coef = dot(v, q);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] -= coef * q[i];
        }
    }
}

std::vector<Vec> orthonormal_basis(const std::vector<Vec>& vectors) {
    std::vector<Vec> basis;
    for (Vec v : vectors) {
        project_out(v, basis);
        if (normalize(v)) {
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

Vec gaussian(std::mt19937_64& rng, std::size_t dim, double scale) {
    std::normal_distribution<double> normal(0.0, scale);
    Vec v(dim);
    for (auto& x : v) {
        x = normal(rng);
    }
    return v;
}

struct Embeddings {
    std::vector<float> frames;
    std::vector<float> text;
};

Embeddings draw_embeddings(std::mt19937_64& rng, const SynthSpec& spec, const std::vector<std::uint32_t>& lengths,
                           const std::vector<bool>& relevant) {
    const std::size_t d = spec.d;
    std::vector<Vec> dirs;
    for (std::size_t s = 0; s < lengths.size(); ++s) {
        Vec u = gaussian(rng, d, 1.0);
        normalize(u);
        dirs.push_back(std::move(u));
    }

    Embeddings out;
    out.frames.reserve(std::size_t(spec.n) * d);
    const double jitter = spec.intra_noise / std::sqrt(double(d));
    for (std::size_t s = 0; s < lengths.size(); ++s) {
        for (std::uint32_t f = 0; f < lengths[s]; ++f) {
            const Vec z = gaussian(rng, d, jitter);
            for (std::size_t i = 0; i < d; ++i) {
                out.frames.push_back(static_cast<float>(dirs[s][i] + z[i]));
            }
        }
    }

    std::vector<Vec> plain;
    Vec target(d, 0.0);
    for (std::size_t s = 0; s < dirs.size(); ++s) {
        if (relevant[s]) {
            for (std::size_t i = 0; i < d; ++i) {
                target[i] += dirs[s][i];
            }
        } else {
            plain.push_back(dirs[s]);
        }
    }
    project_out(target, orthonormal_basis(plain));
    if (!normalize(target)) {
        return {};
    }
    Vec other = gaussian(rng, d, 1.0);
    project_out(other, orthonormal_basis(dirs));
    if (!normalize(other)) {
        other.assign(d, 0.0);
    }
    const double a = spec.text_alignment;
    const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
    out.text.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        out.text[i] = static_cast<float>(a * target[i] + b * other[i]);
    }
    return out;
}

// Picks `count` distinct elements of `pool` uniformly (partial Fisher-Yates).
std::vector<std::uint32_t> pick(std::mt19937_64& rng, std::vector<std::uint32_t> pool, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> dist(i, pool.size() - 1);
        std::swap(pool[i], pool[dist(rng)]);
    }
    pool.resize(count);
    return pool;
}

struct Planted {
    std::vector<std::uint32_t> truth;
    std::vector<std::uint32_t> band;  // flat indices lifted into the top-q band
    std::uint32_t head_frames = 0;    // width of the head edge window
};

}  // namespace

void SynthSpec::validate() const {
    if (n == 0 || c == 0 || d == 0 || num_layers == 0) {
        invalid(fmt::format("n, c, d and num_layers must be positive (n={}, c={}, d={}, layers={})", n, c, d,
                            num_layers));
    }
    if (nonspatial_count >= c) {
        invalid(fmt::format("nonspatial_count {} leaves no spatial positions (c={})", nonspatial_count, c));
    }
    const auto lengths = resolved_segment_lengths();
    for (std::uint32_t rel : resolved_relevant_segments()) {
        if (rel >= lengths.size()) {
            invalid(fmt::format("relevant segment {} out of range ({} segments)", rel, lengths.size()));
        }
    }
    if (!(end_mass >= 0.0 && end_mass < 1.0)) {
        invalid(fmt::format("end mass g = {} must be in [0, 1)", end_mass));
    }
    if (!(peak_ratio >= 1.0) || !std::isfinite(peak_ratio)) {
        invalid(fmt::format("peak ratio lambda = {} must be >= 1", peak_ratio));
    }
    if (planted_per_segment == 0) {
        invalid("planted set R must be nonempty");
    }
    if (!(beta > 0.0) || !(noise > 0.0) || !(intra_noise >= 0.0) || !(edge_lift >= 0.0)) {
        invalid("beta and noise must be positive; intra_noise and edge_lift non-negative");
    }
    if (!(text_alignment > 0.0 && text_alignment <= 1.0)) {
        invalid(fmt::format("text alignment {} must be in (0, 1]", text_alignment));
    }
    if (!(top_q > 0.0 && top_q <= 1.0)) {
        invalid(fmt::format("top_q {} must be in (0, 1]", top_q));
    }
    if (tail_k == 0 || tail_k > n) {
        invalid(fmt::format("tail_k {} must be in [1, n]", tail_k));
    }
    for (std::uint32_t p : resolved_bias_positions()) {
        if (p >= c) {
            invalid(fmt::format("bias position {} out of range (c={})", p, c));
        }
    }
}

std::vector<std::uint32_t> SynthSpec::resolved_segment_lengths() const {
    if (!segment_lengths.empty()) {
        const auto sum = std::accumulate(segment_lengths.begin(), segment_lengths.end(), std::uint64_t{0});
        if (sum != n || std::find(segment_lengths.begin(), segment_lengths.end(), 0u) != segment_lengths.end()) {
            invalid(fmt::format("segment lengths must be positive and sum to n={} (sum {})", n, sum));
        }
        return segment_lengths;
    }
    if (segments == 0 || segments > n) {
        invalid(fmt::format("segment count {} must be in [1, n={}]", segments, n));
    }
    std::vector<std::uint32_t> lengths(segments, n / segments);
    for (std::uint32_t i = 0; i < n % segments; ++i) {
        ++lengths[i];
    }
    return lengths;
}

std::vector<std::uint32_t> SynthSpec::resolved_relevant_segments() const {
    if (!relevant_segments.empty()) {
        return relevant_segments;
    }
    return {static_cast<std::uint32_t>(resolved_segment_lengths().size() / 2)};
}

std::vector<std::uint32_t> SynthSpec::resolved_bias_positions() const {
    if (!bias_positions.empty()) {
        return bias_positions;
    }
    return {c * 10 / 14};
}

SynthSpec biased_spec(std::uint64_t seed) {
    SynthSpec spec;
    spec.end_mass = 0.85;
    spec.peak_ratio = 5.0;
    spec.edge_lift = 3.0;
    spec.seed = seed;
    return spec;
}


namespace {

Planted plant_tokens(std::mt19937_64& rng, const SynthSpec& spec, const std::vector<std::uint32_t>& lengths,
                     const std::vector<std::uint32_t>& relevant, const std::vector<std::uint32_t>& positions) {
    const std::uint32_t n = spec.n;
    const std::uint32_t c = spec.c;
    Planted out;

    std::vector<std::uint32_t> starts(lengths.size());
    std::exclusive_scan(lengths.begin(), lengths.end(), starts.begin(), 0u);

    // Relevant tokens sit at distinct spatial positions within their segment, away from biased positions.
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t p = 0; p < c - spec.nonspatial_count; ++p) {
        if (std::find(positions.begin(), positions.end(), p) == positions.end()) {
            candidates.push_back(p);
        }
    }
    if (spec.planted_per_segment > candidates.size()) {
        infeasible(fmt::format("{} planted tokens per segment but only {} unbiased spatial positions",
                               spec.planted_per_segment, candidates.size()));
    }
    for (std::uint32_t s : relevant) {
        for (std::uint32_t pos : pick(rng, candidates, spec.planted_per_segment)) {
            std::uniform_int_distribution<std::uint32_t> frame(starts[s], starts[s] + lengths[s] - 1);
            out.truth.push_back(frame(rng) * c + pos);
        }
    }
    std::sort(out.truth.begin(), out.truth.end());
    out.truth.erase(std::unique(out.truth.begin(), out.truth.end()), out.truth.end());

    out.head_frames = spec.tail_k;
    if (spec.end_mass > 0.0) {
        const double total = double(n) * c;
        const auto top = static_cast<std::uint64_t>(std::clamp(std::ceil(spec.top_q * total - 1e-9), 1.0, total));
        const auto tail_count = static_cast<std::uint64_t>(std::llround(spec.end_mass * double(top)));
        const std::uint64_t head_count = top - tail_count;
        out.head_frames = std::max<std::uint32_t>(spec.tail_k, static_cast<std::uint32_t>((head_count + c - 1) / c));
        if (tail_count > std::uint64_t(spec.tail_k) * c) {
            infeasible(fmt::format("end mass needs {} band tokens in the last {} frames, which hold only {}",
                                   tail_count, spec.tail_k, std::uint64_t(spec.tail_k) * c));
        }
        if (out.head_frames + spec.tail_k > n) {
            infeasible(fmt::format("head window of {} frames overlaps the {}-frame tail window in {} frames",
                                   out.head_frames, spec.tail_k, n));
        }
        std::vector<std::uint32_t> head_pool(std::size_t(out.head_frames) * c);
        std::iota(head_pool.begin(), head_pool.end(), 0u);
        std::vector<std::uint32_t> tail_pool(std::size_t(spec.tail_k) * c);
        std::iota(tail_pool.begin(), tail_pool.end(), (n - spec.tail_k) * c);
        out.band = pick(rng, std::move(head_pool), head_count);
        const auto tail = pick(rng, std::move(tail_pool), tail_count);
        out.band.insert(out.band.end(), tail.begin(), tail.end());
        std::sort(out.band.begin(), out.band.end());
    }
    return out;
}

// Additive offset per biased position that makes each such position's summed attention
// peak_ratio times the mean position sum. Negative when the position is already above that.
std::vector<double> local_offsets(const std::vector<double>& scores, const SynthSpec& spec,
                                  const std::vector<std::uint32_t>& positions) {
    const std::uint32_t n = spec.n;
    const std::uint32_t c = spec.c;
    std::vector<double> sums(c, 0.0);
    for (std::uint32_t f = 0; f < n; ++f) {
        for (std::uint32_t p = 0; p < c; ++p) {
            sums[p] += scores[std::size_t(f) * c + p];
        }
    }
    double plain = 0.0;
    for (std::uint32_t p = 0; p < c; ++p) {
        if (std::find(positions.begin(), positions.end(), p) == positions.end()) {
            plain += sums[p];
        }
    }
    const double mean = plain / (double(c) - double(positions.size()) * spec.peak_ratio);
    std::vector<double> offsets;
    for (std::uint32_t p : positions) {
        offsets.push_back((spec.peak_ratio * mean - sums[p]) / n);
    }
    return offsets;
}

}  // namespace

SynthSample generate(const SynthSpec& spec) {
    spec.validate();
    const auto lengths = spec.resolved_segment_lengths();
    const auto relevant_ids = spec.resolved_relevant_segments();
    auto positions = spec.resolved_bias_positions();
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    const bool local = spec.peak_ratio > 1.0;
    if (local && double(positions.size()) * spec.peak_ratio >= double(spec.c)) {
        infeasible(fmt::format("{} positions at {}x the mean cannot fit in {} positions", positions.size(),
                               spec.peak_ratio, spec.c));
    }
    if (lengths.size() >= spec.d) {
        infeasible(fmt::format("{} segments need more than d = {} embedding dimensions", lengths.size(), spec.d));
    }

    std::vector<bool> relevant(lengths.size(), false);
    for (std::uint32_t s : relevant_ids) {
        relevant[s] = true;
    }
    std::vector<Segment> planned;
    for (std::uint32_t s = 0, start = 0; s < lengths.size(); start += lengths[s], ++s) {
        planned.push_back({start, lengths[s], s});
    }

    std::mt19937_64 rng(spec.seed);
    SynthSample sample;
    AdtpDump& dump = sample.dump;
    dump.n = spec.n;
    dump.c = spec.c;
    dump.d = spec.d;
    dump.num_layers = spec.num_layers;
    dump.nonspatial_count = spec.nonspatial_count;
    dump.meta = {{"generator", "adatp-synth"},
                 {"seed", std::to_string(spec.seed)},
                 {"end_mass", fmt::format("{}", spec.end_mass)},
                 {"peak_ratio", fmt::format("{}", spec.peak_ratio)}};

    bool recovered = false;
    for (int attempt = 0; attempt < kMaxEmbeddingAttempts && !recovered; ++attempt) {
        Embeddings e = draw_embeddings(rng, spec, lengths, relevant);
        if (e.text.empty()) {
            continue;
        }
        dump.frame_embeddings = std::move(e.frames);
        dump.text_embedding = std::move(e.text);
        try {
            FrameRelevance rel = frame_relevance(dump);
            recovered = partition(dump.frame_embeddings, dump.d, spec.tau_s) == planned &&
                        select_significant(rel, planned, spec.tau_t) == relevant;
        } catch (const Error&) {
            recovered = false;
        }
    }
    if (!recovered) {
        infeasible(fmt::format("planned segments/relevance not recoverable at tau_s={}, tau_t={} after {} draws",
                               spec.tau_s, spec.tau_t, kMaxEmbeddingAttempts));
    }

    const Planted planted = plant_tokens(rng, spec, lengths, relevant_ids, positions);
    sample.truth = planted.truth;

    const std::size_t tokens = dump.token_count();
    std::vector<double> signal(tokens, 0.0);
    for (std::uint32_t flat : planted.truth) {
        signal[flat] += spec.beta;
    }
    if (spec.edge_lift > 0.0) {
        for (std::size_t i = 0; i < tokens; ++i) {
            const std::uint32_t frame = static_cast<std::uint32_t>(i / spec.c);
            if (frame < planted.head_frames || frame >= spec.n - spec.tail_k) {
                signal[i] += spec.edge_lift;
            }
        }
    }
    const double ceiling = spec.noise + spec.beta + spec.edge_lift;  // bound on any unbanded, unbiased score
    const double margin = 0.5 * spec.noise;

    std::vector<std::uint32_t> band_per_pos(spec.c, 0);
    for (std::uint32_t flat : planted.band) {
        ++band_per_pos[flat % spec.c];
    }

    dump.attention.resize(tokens * spec.num_layers);
    std::uniform_real_distribution<double> base(0.0, spec.noise);
    std::vector<double> scores(tokens);
    for (std::uint32_t l = 0; l < spec.num_layers; ++l) {
        for (std::size_t i = 0; i < tokens; ++i) {
            scores[i] = base(rng) + signal[i];
        }

        if (!planted.band.empty()) {
            // The band lift B must clear every unbanded score, including biased positions whose
            // offset itself grows with B: delta_p(B) = u_p + v_p * B.
            double lift = ceiling + margin;
            if (local) {
                const auto u = local_offsets(scores, spec, positions);
                const double denom = double(spec.c) - double(positions.size()) * spec.peak_ratio;
                double band_plain = 0.0;
                for (std::uint32_t p = 0; p < spec.c; ++p) {
                    if (!std::binary_search(positions.begin(), positions.end(), p)) {
                        band_plain += band_per_pos[p];
                    }
                }
                for (std::size_t j = 0; j < positions.size(); ++j) {
                    const double v = (spec.peak_ratio * band_plain / denom - band_per_pos[positions[j]]) / spec.n;
                    if (v >= 1.0) {
                        infeasible(fmt::format("local bias at position {} outgrows the top-q band", positions[j]));
                    }
                    lift = std::max(lift, (ceiling + margin + u[j]) / (1.0 - v));
                }
            }
            for (std::uint32_t flat : planted.band) {
                scores[flat] += lift;
            }
        }
        if (local) {
            const auto delta = local_offsets(scores, spec, positions);
            for (std::size_t j = 0; j < positions.size(); ++j) {
                if (delta[j] < 0.0) {
                    infeasible(fmt::format("position {} already exceeds {} times the mean position attention",
                                           positions[j], spec.peak_ratio));
                }
            }
            for (std::uint32_t f = 0; f < spec.n; ++f) {
                for (std::size_t j = 0; j < positions.size(); ++j) {
                    scores[std::size_t(f) * spec.c + positions[j]] += delta[j];
                }
            }
        }

        const double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
        float* out = dump.attention.data() + std::size_t(l) * tokens;
        for (std::size_t i = 0; i < tokens; ++i) {
            out[i] = static_cast<float>(scores[i] / sum);
        }
    }
    validate(dump);
    return sample;
}

std::string format_truth(std::span<const std::uint32_t> truth) {
    std::string out;
    for (std::uint32_t flat : truth) {
        out += std::to_string(flat);
        out += '\n';
    }
    return out;
}

std::vector<std::uint32_t> parse_truth(std::string_view text) {
    std::vector<std::uint32_t> out;
    std::size_t line = 0;
    while (!text.empty()) {
        ++line;
        const auto eol = text.find('\n');
        std::string_view row = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        while (!row.empty() && (row.back() == '\r' || row.back() == ' ' || row.back() == '\t')) {
            row.remove_suffix(1);
        }
        while (!row.empty() && (row.front() == ' ' || row.front() == '\t')) {
            row.remove_prefix(1);
        }
        if (row.empty()) {
            continue;
        }
        std::uint32_t value = 0;
        const auto [ptr, ec] = std::from_chars(row.data(), row.data() + row.size(), value);
        if (ec != std::errc() || ptr != row.data() + row.size()) {
            throw Error(ErrorCode::MalformedTruth, fmt::format("line {}: '{}' is not a flat token index", line, row));
        }
        out.push_back(value);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint32_t> fastv_prune_count(const AdtpDump& dump, std::uint64_t count, std::uint32_t layer) {
    if (layer >= dump.num_layers) {
        throw Error(ErrorCode::RangeOutOfBounds,
                    fmt::format("FastV layer {} has no score vector ({} layers)", layer, dump.num_layers));
    }
    const auto scores = dump.layer_scores(layer);
    std::vector<std::uint32_t> order(dump.token_count());
    std::iota(order.begin(), order.end(), 0u);
    const auto keep = static_cast<std::ptrdiff_t>(std::min<std::uint64_t>(count, order.size()));
    std::partial_sort(order.begin(), order.begin() + keep, order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });
    order.resize(static_cast<std::size_t>(keep));
    std::sort(order.begin(), order.end());
    return order;
}

namespace {

std::uint64_t retained_count(const AdtpDump& dump, double retention) {
    if (!(retention > 0.0 && retention <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, fmt::format("retention {} must be in (0, 1]", retention));
    }
    return static_cast<std::uint64_t>(std::floor(retention * double(dump.token_count()) + kBudgetFloorEps));
}

}  // namespace

std::vector<std::uint32_t> fastv_prune(const AdtpDump& dump, double retention, std::uint32_t layer) {
    return fastv_prune_count(dump, retained_count(dump, retention), layer);
}

std::vector<std::uint32_t> random_prune_count(const AdtpDump& dump, std::uint64_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> pool(dump.token_count());
    std::iota(pool.begin(), pool.end(), 0u);
    auto kept = pick(rng, std::move(pool), std::min<std::uint64_t>(count, dump.token_count()));
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<std::uint32_t> random_prune(const AdtpDump& dump, double retention, std::uint64_t seed) {
    return random_prune_count(dump, retained_count(dump, retention), seed);
}

double recall(std::span<const std::uint32_t> kept, std::span<const std::uint32_t> truth) {
    if (truth.empty()) {
        throw Error(ErrorCode::EmptyInput, "recall against an empty ground-truth set");
    }
    const std::unordered_set<std::uint32_t> keep(kept.begin(), kept.end());
    std::size_t hits = 0;
    for (std::uint32_t flat : truth) {
        hits += keep.count(flat);
    }
    return double(hits) / double(truth.size());
}

std::string_view to_string(Method m) {
    switch (m) {
    case Method::AdaTP: return "adatp";
    case Method::FastV: return "fastv";
    case Method::Random: return "random";
    }
    return "unknown";
}

Method method_from_string(std::string_view s) {
    for (Method m : {Method::AdaTP, Method::FastV, Method::Random}) {
        if (to_string(m) == s) {
            return m;
        }
    }
    throw Error(ErrorCode::InvalidConfig, fmt::format("unknown method '{}'", s));
}

const MethodResult& RecallResult::at(Method m) const {
    for (const auto& r : methods) {
        if (r.method == m) {
            return r;
        }
    }
    throw Error(ErrorCode::InvalidConfig, fmt::format("method '{}' was not compared", to_string(m)));
}

namespace {

struct SampleOutcome {
    std::vector<double> recall;
    std::vector<std::uint64_t> kept;
    std::vector<double> flops;
};

SampleOutcome evaluate(const SynthSample& sample, const AdaTPConfig& cfg, const CompareOptions& opts,
                       std::size_t index) {
    const AdtpDump& dump = sample.dump;
    const PruneReport report = run(dump, cfg, opts.shape);
    const std::uint64_t matched = report.final_kept.size();

    ModelShape shape = report.shape;
    std::vector<std::uint64_t> baseline_layers(dump.num_layers, dump.token_count());
    for (std::uint32_t l = opts.fastv_layer + 1; l < dump.num_layers; ++l) {
        baseline_layers[l] = matched;
    }
    const double baseline_flops = flops_ratio(baseline_layers, shape);

    SampleOutcome out;
    for (Method m : opts.methods) {
        std::vector<std::uint32_t> kept;
        double flops = baseline_flops;
        switch (m) {
        case Method::AdaTP:
            kept = report.final_kept;
            flops = report.flops_ratio;
            break;
        case Method::FastV:
            kept = fastv_prune_count(dump, matched, opts.fastv_layer);
            break;
        case Method::Random:
            kept = random_prune_count(dump, matched, opts.random_seed + index);
            break;
        }
        out.recall.push_back(recall(kept, sample.truth));
        out.kept.push_back(kept.size());
        out.flops.push_back(flops);
    }
    return out;
}

}  // namespace

RecallResult compare(std::span<const SynthSample> corpus, const AdaTPConfig& cfg, const CompareOptions& opts) {
    if (corpus.empty()) {
        throw Error(ErrorCode::EmptyInput, "compare needs at least one sample");
    }
    if (opts.methods.empty()) {
        throw Error(ErrorCode::InvalidConfig, "compare needs at least one method");
    }
    std::vector<SampleOutcome> outcomes(corpus.size());
    std::vector<std::exception_ptr> errors(corpus.size());

    const auto count = static_cast<std::ptrdiff_t>(corpus.size());
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            outcomes[idx] = evaluate(corpus[idx], cfg, opts, idx);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    RecallResult result;
    for (std::size_t m = 0; m < opts.methods.size(); ++m) {
        MethodResult r;
        r.method = opts.methods[m];
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            r.recall.push_back(outcomes[i].recall[m]);
            r.kept.push_back(outcomes[i].kept[m]);
            r.flops_ratio.push_back(outcomes[i].flops[m]);
            r.mean_retention += double(outcomes[i].kept[m]) / double(corpus[i].dump.token_count());
        }
        const double samples = double(corpus.size());
        r.mean_retention /= samples;
        r.mean_recall = std::accumulate(r.recall.begin(), r.recall.end(), 0.0) / samples;
        r.mean_flops_ratio = std::accumulate(r.flops_ratio.begin(), r.flops_ratio.end(), 0.0) / samples;
        if (corpus.size() > 1) {
            double ss = 0.0;
            for (double v : r.recall) {
                ss += (v - r.mean_recall) * (v - r.mean_recall);
            }
            r.std_recall = std::sqrt(ss / (samples - 1.0));
        }
        result.methods.push_back(std::move(r));
    }
    return result;
}

PairedTest paired_one_sided(std::span<const double> a, std::span<const double> b, double confidence) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::ShapeMismatch, fmt::format("paired samples of sizes {} and {}", a.size(), b.size()));
    }
    if (a.size() < 2) {
        throw Error(ErrorCode::EmptyInput, "a paired test needs at least two samples");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, fmt::format("confidence {} must be in (0, 1)", confidence));
    }
    PairedTest t;
    t.samples = a.size();
    const double count = double(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        t.mean_diff += a[i] - b[i];
    }
    t.mean_diff /= count;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double dev = a[i] - b[i] - t.mean_diff;
        ss += dev * dev;
    }
    t.sd_diff = std::sqrt(ss / (count - 1.0));
    t.critical = boost::math::quantile(boost::math::students_t(count - 1.0), confidence);
    if (t.sd_diff > 0.0) {
        t.t = t.mean_diff / (t.sd_diff / std::sqrt(count));
    } else {
        t.t = t.mean_diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    t.significant = t.t > t.critical;
    return t;
}

}  // namespace adatp
