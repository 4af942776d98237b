// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/bias_analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "adatp/error.hpp"
#include "adatp/kernels.hpp"

namespace adatp {

GlobalBias global_bias(std::span<const float> scores, std::uint32_t n, std::uint32_t c, double q, std::uint32_t k) {
    const std::size_t total = std::size_t(n) * c;
    if (scores.size() != total) {
        throw Error(ErrorCode::ShapeMismatch, fmt::format("{} scores for n*c = {}", scores.size(), total));
    }
    if (!(q > 0.0 && q <= 1.0) || k < 1 || k > n) {
        throw Error(ErrorCode::InvalidConfig, fmt::format("need 0 < q <= 1 and 1 <= k <= n (q={}, k={})", q, k));
    }
    const auto top = static_cast<std::size_t>(
        std::clamp(std::ceil(q * double(total) - 1e-9), 1.0, double(total)));

    std::vector<std::uint32_t> order(total);
    std::iota(order.begin(), order.end(), 0u);
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top - 1), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
                     });

    std::size_t tail = 0;
    std::size_t head = 0;
    for (std::size_t i = 0; i < top; ++i) {
        const std::uint32_t frame = order[i] / c;
        tail += frame >= n - k ? 1 : 0;
        head += frame < k ? 1 : 0;
    }
    return {top, double(tail) / double(top), double(head) / double(top)};
}

LocalBias local_bias_from_sums(std::vector<double> position_sums) {
    LocalBias out;
    out.position_sums = std::move(position_sums);
    if (out.position_sums.empty()) {
        return out;
    }
    const auto peak = std::max_element(out.position_sums.begin(), out.position_sums.end());
    out.peak_pos = static_cast<std::uint32_t>(peak - out.position_sums.begin());
    const double mean =
        std::accumulate(out.position_sums.begin(), out.position_sums.end(), 0.0) / double(out.position_sums.size());
    out.peak_ratio = mean > 0.0 ? std::max(1.0, *peak / mean) : 1.0;
    return out;
}

LocalBias local_bias(std::span<const float> scores, std::uint32_t n, std::uint32_t c) {
    if (scores.size() != std::size_t(n) * c) {
        throw Error(ErrorCode::ShapeMismatch,
                    fmt::format("{} scores for n*c = {}", scores.size(), std::size_t(n) * c));
    }
    std::vector<double> sums(c);
    kernels::position_sums_parallel(scores, n, c, sums);
    return local_bias_from_sums(std::move(sums));
}

BiasReport analyze(const AdtpDump& dump, double q, std::uint32_t k) {
    BiasReport report;
    report.reserve(dump.num_layers);
    for (std::uint32_t l = 0; l < dump.num_layers; ++l) {
        const auto scores = dump.layer_scores(l);
        LayerBias lb;
        lb.layer = l;
        lb.global = global_bias(scores, dump.n, dump.c, q, k);
        lb.local = local_bias(scores, dump.n, dump.c);
        lb.frame_sums.resize(dump.n);
        kernels::frame_sums_parallel(scores, dump.n, dump.c, lb.frame_sums);
        report.push_back(std::move(lb));
    }
    return report;
}

BiasReport corpus_mean(std::span<const BiasReport> reports) {
    if (reports.empty()) {
        throw Error(ErrorCode::EmptyInput, "corpus mean of zero reports");
    }
    const auto& first = reports.front();
    BiasReport mean;
    for (std::size_t l = 0; l < first.size(); ++l) {
        LayerBias acc;
        acc.layer = first[l].layer;
        acc.global.top_count = first[l].global.top_count;
        acc.frame_sums.assign(first[l].frame_sums.size(), 0.0);
        std::vector<double> pos(first[l].local.position_sums.size(), 0.0);
        for (const auto& r : reports) {
            if (r.size() != first.size() || r[l].frame_sums.size() != acc.frame_sums.size() ||
                r[l].local.position_sums.size() != pos.size()) {
                throw Error(ErrorCode::ShapeMismatch, "corpus samples differ in layer count, n or c");
            }
            acc.global.end_fraction += r[l].global.end_fraction;
            acc.global.head_fraction += r[l].global.head_fraction;
            for (std::size_t f = 0; f < acc.frame_sums.size(); ++f) {
                acc.frame_sums[f] += r[l].frame_sums[f];
            }
            for (std::size_t p = 0; p < pos.size(); ++p) {
                pos[p] += r[l].local.position_sums[p];
            }
        }
        const double count = double(reports.size());
        acc.global.end_fraction /= count;
        acc.global.head_fraction /= count;
        for (auto& v : acc.frame_sums) {
            v /= count;
        }
        for (auto& v : pos) {
            v /= count;
        }
        acc.local = local_bias_from_sums(std::move(pos));
        mean.push_back(std::move(acc));
    }
    return mean;
}

}  // namespace adatp
