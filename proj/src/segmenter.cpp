// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/segmenter.hpp"

#include <cmath>

#include <fmt/format.h>

#include "adatp/error.hpp"
#include "adatp/kernels.hpp"

namespace adatp {

double cos_sim(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::ShapeMismatch, fmt::format("vector lengths {} and {} differ", a.size(), b.size()));
    }
    const double s = kernels::cosine_unchecked(a, b);
    if (std::isnan(s)) {
        throw Error(ErrorCode::ZeroNormVector, "cosine similarity of a zero-norm vector");
    }
    return s;
}

std::vector<Segment> partition(std::span<const float> frames, std::size_t dim, double tau_s) {
    if (dim == 0 || frames.empty()) {
        throw Error(ErrorCode::EmptyInput, "no frames to partition");
    }
    if (frames.size() % dim != 0) {
        throw Error(ErrorCode::ShapeMismatch,
                    fmt::format("{} embedding values are not a multiple of dim {}", frames.size(), dim));
    }
    const std::size_t n = frames.size() / dim;
    auto frame = [&](std::size_t i) { return frames.subspan(i * dim, dim); };

    for (std::size_t i = 0; i < n; ++i) {
        bool zero = true;
        for (float v : frame(i)) {
            zero = zero && v == 0.0f;
        }
        if (zero) {
            throw Error(ErrorCode::ZeroNormFrame, fmt::format("frame {} has a zero embedding", i));
        }
    }

    std::vector<Segment> segments;
    Segment current{0, 1, 0};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (kernels::cosine_unchecked(frame(i), frame(i + 1)) >= tau_s) {
            ++current.len;
        } else {
            segments.push_back(current);
            current = Segment{static_cast<std::uint32_t>(i + 1), 1, current.id + 1};
        }
    }
    segments.push_back(current);
    return segments;
}

}  // namespace adatp
