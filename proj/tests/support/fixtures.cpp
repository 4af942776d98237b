// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <algorithm>

namespace fixture {

namespace {

std::uint32_t uniform(std::mt19937_64& rng, std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
}

}  // namespace

adatp::AdtpDump random_dump(std::mt19937_64& rng, const RandomDumpOptions& opts) {
    adatp::AdtpDump dump;
    dump.n = uniform(rng, 1, opts.max_n);
    dump.c = uniform(rng, 1, opts.max_c);
    dump.d = uniform(rng, 2, opts.max_d);
    dump.num_layers = uniform(rng, opts.min_layers, opts.max_layers);
    dump.nonspatial_count = uniform(rng, 0, std::min<std::uint32_t>(dump.c, 2));
    dump.meta = {{"sample", std::to_string(rng() % 1000)}};

    std::normal_distribution<float> normal(0.0f, 1.0f);
    std::vector<float> base(dump.d);
    for (std::uint32_t f = 0; f < dump.n; ++f) {
        if (f == 0 || rng() % 4 == 0) {
            for (auto& x : base) {
                x = normal(rng);
            }
        }
        for (std::uint32_t i = 0; i < dump.d; ++i) {
            dump.frame_embeddings.push_back(base[i] + 0.05f * normal(rng));
        }
    }
    // Text is a noisy copy of some frame, or pure noise.
    const std::uint32_t anchor = uniform(rng, 0, dump.n - 1);
    for (std::uint32_t i = 0; i < dump.d; ++i) {
        const float noise = normal(rng);
        dump.text_embedding.push_back(rng() % 2 ? dump.frame_embeddings[anchor * dump.d + i] + 0.5f * noise : noise);
    }
    for (auto& v : dump.text_embedding) {
        if (v == 0.0f) {
            v = 1.0f;
        }
    }

    const std::size_t total = std::size_t(dump.num_layers) * dump.token_count();
    dump.attention.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        dump.attention.push_back(float(uniform(rng, 0, opts.score_levels - 1)) / float(opts.score_levels));
    }
    return dump;
}

adatp::AdtpDump simple_dump(std::uint32_t n, std::uint32_t c, std::uint32_t layers, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    adatp::AdtpDump dump;
    dump.n = n;
    dump.c = c;
    dump.d = 4;
    dump.num_layers = layers;
    dump.frame_embeddings.assign(std::size_t(n) * 4, 0.0f);
    for (std::uint32_t f = 0; f < n; ++f) {
        dump.frame_embeddings[f * 4] = 1.0f;
    }
    dump.text_embedding = {1.0f, 0.0f, 0.0f, 0.0f};
    dump.attention.resize(std::size_t(layers) * n * c);
    for (auto& v : dump.attention) {
        v = u(rng);
    }
    return dump;
}

}  // namespace fixture
