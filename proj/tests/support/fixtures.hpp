// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "adatp/dump_io.hpp"

namespace fixture {

struct RandomDumpOptions {
    std::uint32_t max_n = 32;
    std::uint32_t max_c = 32;
    std::uint32_t max_d = 16;
    std::uint32_t min_layers = 1;
    std::uint32_t max_layers = 24;
    // Scores drawn from this many levels so exact ties are common.
    std::uint32_t score_levels = 8;
};

/// Valid dump whose frames form random runs of near-identical embeddings, so the
/// segmenter sees both continuations and breaks, and some runs align with the text.
adatp::AdtpDump random_dump(std::mt19937_64& rng, const RandomDumpOptions& opts = {});

/// n x c x layers dump with uniform random scores and unit frame embeddings.
adatp::AdtpDump simple_dump(std::uint32_t n, std::uint32_t c, std::uint32_t layers, std::uint64_t seed);

}  // namespace fixture
