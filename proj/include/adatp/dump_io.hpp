// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0
//
// ADTP v1 container: one video/question sample with pooled frame embeddings,
// the pooled text embedding and per-layer text-to-visual attention scores.
//
// Layout (little-endian, no padding):
//   "ADTP" | u32 version=1 | u32 n | u32 c | u32 d | u32 num_layers
//   | u32 nonspatial_count | u32 meta_len | meta (UTF-8 JSON object of strings)
//   | n*d f32 frame embeddings (frame-major) | d f32 text embedding
//   | num_layers*n*c f32 attention (layer-major, then flat token index)

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace adatp {

inline constexpr std::uint32_t kAdtpVersion = 1;
inline constexpr std::size_t kAdtpHeaderSize = 4 + 7 * 4;

/// A visual token addressed by frame and within-frame spatial position.
struct TokenId {
    std::uint32_t frame = 0;
    std::uint32_t pos = 0;

    friend bool operator==(const TokenId&, const TokenId&) = default;
};

inline std::uint32_t flatten(TokenId id, std::uint32_t c) { return id.frame * c + id.pos; }
inline TokenId unflatten(std::uint32_t flat, std::uint32_t c) { return {flat / c, flat % c}; }

struct AdtpDump {
    std::uint32_t n = 0;           // frames
    std::uint32_t c = 0;           // tokens per frame
    std::uint32_t d = 0;           // embedding dimension
    std::uint32_t num_layers = 0;  // language-model layers with a score vector
    std::uint32_t nonspatial_count = 0;  // trailing positions of each frame that are not image patches
    std::map<std::string, std::string> meta;
    std::vector<float> frame_embeddings;  // n * d
    std::vector<float> text_embedding;    // d
    std::vector<float> attention;         // num_layers * n * c

    std::size_t token_count() const { return std::size_t(n) * c; }
    std::span<const float> frame(std::size_t i) const {
        return std::span<const float>(frame_embeddings).subspan(i * d, d);
    }
    std::span<const float> layer_scores(std::size_t layer) const {
        return std::span<const float>(attention).subspan(layer * token_count(), token_count());
    }

    friend bool operator==(const AdtpDump&, const AdtpDump&) = default;
};

/// Throws Error(InvariantViolation) naming the first offending field.
void validate(const AdtpDump& dump);

/// Field-wise equality with floats compared by bit pattern.
bool bit_equal(const AdtpDump& a, const AdtpDump& b);

std::vector<std::uint8_t> write_dump(const AdtpDump& dump);
AdtpDump read_dump(std::span<const std::uint8_t> bytes);

AdtpDump read_dump_file(const std::filesystem::path& path);
/// Writes through a temporary sibling file and renames it into place.
void write_dump_file(const std::filesystem::path& path, const AdtpDump& dump);

/// Row-major view of a dense matrix.
struct MatrixView {
    std::span<const float> data;
    std::size_t rows = 0;
    std::size_t cols = 0;

    float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Half-open index range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end > begin ? end - begin : 0; }
};

/// Mean over `text_rows` of the `visual_cols` columns of a full attention map.
/// Throws RangeOutOfBounds when either range leaves the matrix or text_rows is empty.
std::vector<float> reduce_attention(const MatrixView& full_map, IndexRange text_rows, IndexRange visual_cols);

}  // namespace adatp
