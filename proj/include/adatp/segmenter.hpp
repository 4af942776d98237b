// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace adatp {

/// Contiguous run of frames [start, start + len).
struct Segment {
    std::uint32_t start = 0;
    std::uint32_t len = 0;
    std::uint32_t id = 0;

    std::uint32_t end() const { return start + len; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

/// aᵀb / (‖a‖‖b‖), clamped to [-1, 1]. Throws ZeroNormVector or ShapeMismatch.
double cos_sim(std::span<const float> a, std::span<const float> b);

/// Greedy left-to-right split: frame i+1 stays with frame i iff cos_sim(v_i, v_{i+1}) >= tau_s.
/// `frames` holds n row vectors of length `dim`. Throws EmptyInput or ZeroNormFrame.
std::vector<Segment> partition(std::span<const float> frames, std::size_t dim, double tau_s);

}  // namespace adatp
