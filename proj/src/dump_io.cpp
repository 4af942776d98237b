// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/dump_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <string_view>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "adatp/error.hpp"
#include "adatp/file_util.hpp"
#include "adatp/kernels.hpp"

namespace adatp {

namespace {

constexpr char kMagic[4] = {'A', 'D', 'T', 'P'};

std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::nullopt;
    }
    return a * b;
}

class ByteWriter {
public:
    void bytes(const void* p, std::size_t len) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        m_out.insert(m_out.end(), b, b + len);
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            m_out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    void f32s(std::span<const float> values) {
        for (float v : values) {
            u32(std::bit_cast<std::uint32_t>(v));
        }
    }
    std::vector<std::uint8_t> take() { return std::move(m_out); }

private:
    std::vector<std::uint8_t> m_out;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> in) : m_in(in) {}

    std::size_t offset() const { return m_pos; }
    std::size_t remaining() const { return m_in.size() - m_pos; }

    void require(std::uint64_t len, std::string_view field) const {
        if (len > remaining()) {
            throw Error(ErrorCode::TruncatedPayload,
                        fmt::format("{} needs {} bytes at offset {}, only {} remain", field, len, m_pos,
                                    remaining()));
        }
    }
    std::uint32_t u32(std::string_view field) {
        require(4, field);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(m_in[m_pos + i]) << (8 * i);
        }
        m_pos += 4;
        return v;
    }
    std::span<const std::uint8_t> take(std::size_t len, std::string_view field) {
        require(len, field);
        auto s = m_in.subspan(m_pos, len);
        m_pos += len;
        return s;
    }

private:
    std::span<const std::uint8_t> m_in;
    std::size_t m_pos = 0;
};

// Reads `count` floats; non-finite values are reported with the field-relative index and byte offset.
std::vector<float> read_floats(ByteReader& r, std::size_t count, std::string_view field) {
    std::vector<float> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t at = r.offset();
        const float v = std::bit_cast<float>(r.u32(field));
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteValue,
                        fmt::format("{}[{}] at offset {} is not finite", field, i, at));
        }
        out[i] = v;
    }
    return out;
}

std::map<std::string, std::string> parse_meta(std::span<const std::uint8_t> raw, std::size_t offset) {
    std::map<std::string, std::string> meta;
    if (raw.empty()) {
        return meta;
    }
    const auto parsed = nlohmann::json::parse(raw.begin(), raw.end(), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw Error(ErrorCode::MalformedMeta, fmt::format("meta at offset {} is not a JSON object", offset));
    }
    for (const auto& [key, value] : parsed.items()) {
        if (!value.is_string()) {
            throw Error(ErrorCode::MalformedMeta,
                        fmt::format("meta value for key '{}' at offset {} is not a string", key, offset));
        }
        meta.emplace(key, value.get<std::string>());
    }
    return meta;
}

std::string encode_meta(const std::map<std::string, std::string>& meta) {
    if (meta.empty()) {
        return {};
    }
    return nlohmann::json(meta).dump();
}

void fail_invariant(const std::string& what) { throw Error(ErrorCode::InvariantViolation, what); }

}  // namespace

void validate(const AdtpDump& dump) {
    if (dump.n == 0 || dump.c == 0 || dump.d == 0 || dump.num_layers == 0) {
        fail_invariant(fmt::format("dimensions must be positive (n={}, c={}, d={}, num_layers={})", dump.n,
                                   dump.c, dump.d, dump.num_layers));
    }
    if (dump.nonspatial_count > dump.c) {
        fail_invariant(fmt::format("nonspatial_count {} exceeds c {}", dump.nonspatial_count, dump.c));
    }
    if (dump.frame_embeddings.size() != std::size_t(dump.n) * dump.d) {
        fail_invariant(fmt::format("frame_embeddings has {} entries, expected n*d = {}",
                                   dump.frame_embeddings.size(), std::size_t(dump.n) * dump.d));
    }
    if (dump.text_embedding.size() != dump.d) {
        fail_invariant(
            fmt::format("text_embedding has {} entries, expected d = {}", dump.text_embedding.size(), dump.d));
    }
    if (dump.attention.size() != dump.token_count() * dump.num_layers) {
        fail_invariant(fmt::format("attention has {} entries, expected num_layers*n*c = {}",
                                   dump.attention.size(), dump.token_count() * dump.num_layers));
    }
    for (std::size_t i = 0; i < dump.frame_embeddings.size(); ++i) {
        if (!std::isfinite(dump.frame_embeddings[i])) {
            fail_invariant(fmt::format("frame_embeddings[{}] is not finite", i));
        }
    }
    for (std::size_t i = 0; i < dump.text_embedding.size(); ++i) {
        if (!std::isfinite(dump.text_embedding[i])) {
            fail_invariant(fmt::format("text_embedding[{}] is not finite", i));
        }
    }
    const std::size_t per_layer = dump.token_count();
    for (std::size_t i = 0; i < dump.attention.size(); ++i) {
        const float v = dump.attention[i];
        if (!std::isfinite(v) || v < 0.0f) {
            fail_invariant(fmt::format("attention at (layer {}, flat index {}) is {}", i / per_layer,
                                       i % per_layer, v));
        }
    }
}

bool bit_equal(const AdtpDump& a, const AdtpDump& b) {
    auto same = [](const std::vector<float>& x, const std::vector<float>& y) {
        return x.size() == y.size() && (x.empty() || std::memcmp(x.data(), y.data(), x.size() * sizeof(float)) == 0);
    };
    return a.n == b.n && a.c == b.c && a.d == b.d && a.num_layers == b.num_layers &&
           a.nonspatial_count == b.nonspatial_count && a.meta == b.meta &&
           same(a.frame_embeddings, b.frame_embeddings) && same(a.text_embedding, b.text_embedding) &&
           same(a.attention, b.attention);
}

std::vector<std::uint8_t> write_dump(const AdtpDump& dump) {
    validate(dump);
    const std::string meta = encode_meta(dump.meta);

    ByteWriter w;
    w.bytes(kMagic, sizeof(kMagic));
    w.u32(kAdtpVersion);
    w.u32(dump.n);
    w.u32(dump.c);
    w.u32(dump.d);
    w.u32(dump.num_layers);
    w.u32(dump.nonspatial_count);
    w.u32(static_cast<std::uint32_t>(meta.size()));
    w.bytes(meta.data(), meta.size());
    w.f32s(dump.frame_embeddings);
    w.f32s(dump.text_embedding);
    w.f32s(dump.attention);
    return w.take();
}

AdtpDump read_dump(std::span<const std::uint8_t> bytes) {
    if (!bytes.empty() && std::memcmp(bytes.data(), kMagic, std::min<std::size_t>(bytes.size(), 4)) != 0) {
        throw Error(ErrorCode::BadMagic, "offset 0: stream does not start with \"ADTP\"");
    }
    ByteReader r(bytes);
    r.take(4, "magic");
    const std::uint32_t version = r.u32("version");
    if (version != kAdtpVersion) {
        throw Error(ErrorCode::UnsupportedVersion, fmt::format("offset 4: version {} (expected 1)", version));
    }

    AdtpDump dump;
    dump.n = r.u32("n");
    dump.c = r.u32("c");
    dump.d = r.u32("d");
    dump.num_layers = r.u32("num_layers");
    dump.nonspatial_count = r.u32("nonspatial_count");
    const std::uint32_t meta_len = r.u32("meta_len");

    if (dump.n == 0 || dump.c == 0 || dump.d == 0 || dump.num_layers == 0) {
        throw Error(ErrorCode::InvalidHeader,
                    fmt::format("offset 8: zero dimension (n={}, c={}, d={}, num_layers={})", dump.n, dump.c,
                                dump.d, dump.num_layers));
    }
    if (dump.nonspatial_count > dump.c) {
        throw Error(ErrorCode::InvalidHeader,
                    fmt::format("offset 24: nonspatial_count {} exceeds c {}", dump.nonspatial_count, dump.c));
    }

    // Size the whole payload up front so corrupted dimensions fail before any allocation.
    const auto frame_floats = checked_mul(dump.n, dump.d);
    const auto tokens = checked_mul(dump.n, dump.c);
    const auto attn_floats = tokens ? checked_mul(*tokens, dump.num_layers) : std::nullopt;
    std::optional<std::uint64_t> payload;
    if (frame_floats && attn_floats) {
        const std::uint64_t floats = *frame_floats + dump.d + *attn_floats;
        if (floats >= *frame_floats) {
            payload = checked_mul(floats, 4);
        }
    }
    if (!payload || *payload + meta_len > r.remaining()) {
        throw Error(ErrorCode::TruncatedPayload,
                    fmt::format("offset {}: header declares more data than the {} bytes remaining", r.offset(),
                                r.remaining()));
    }

    const std::size_t meta_offset = r.offset();
    dump.meta = parse_meta(r.take(meta_len, "meta"), meta_offset);
    dump.frame_embeddings = read_floats(r, static_cast<std::size_t>(*frame_floats), "frame_embeddings");
    dump.text_embedding = read_floats(r, dump.d, "text_embedding");

    const std::size_t per_layer = dump.token_count();
    dump.attention.resize(static_cast<std::size_t>(*attn_floats));
    for (std::size_t i = 0; i < dump.attention.size(); ++i) {
        const std::size_t at = r.offset();
        const float v = std::bit_cast<float>(r.u32("attention"));
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteValue, fmt::format("attention at (layer {}, flat index {}) offset {} is not finite",
                                                               i / per_layer, i % per_layer, at));
        }
        if (v < 0.0f) {
            throw Error(ErrorCode::NegativeAttention,
                        fmt::format("attention at (layer {}, flat index {}) offset {} is {}", i / per_layer,
                                    i % per_layer, at, v));
        }
        dump.attention[i] = v;
    }
    if (r.remaining() != 0) {
        throw Error(ErrorCode::TrailingData,
                    fmt::format("offset {}: {} unexpected bytes after attention block", r.offset(), r.remaining()));
    }
    return dump;
}

AdtpDump read_dump_file(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    try {
        return read_dump(bytes);
    } catch (const Error& e) {
        std::string_view what = e.what();
        what.remove_prefix(std::min(what.size(), to_string(e.code()).size() + 2));
        throw Error(e.code(), fmt::format("{}: {}", path.string(), what));
    }
}

void write_dump_file(const std::filesystem::path& path, const AdtpDump& dump) {
    write_file_atomic(path, write_dump(dump));
}

std::vector<float> reduce_attention(const MatrixView& full_map, IndexRange text_rows, IndexRange visual_cols) {
    if (full_map.data.size() != full_map.rows * full_map.cols) {
        throw Error(ErrorCode::ShapeMismatch,
                    fmt::format("matrix data has {} entries, expected {}x{}", full_map.data.size(), full_map.rows,
                                full_map.cols));
    }
    if (text_rows.size() == 0 || text_rows.end > full_map.rows) {
        throw Error(ErrorCode::RangeOutOfBounds, fmt::format("text rows [{}, {}) invalid for {} rows",
                                                             text_rows.begin, text_rows.end, full_map.rows));
    }
    if (visual_cols.size() == 0 || visual_cols.end > full_map.cols) {
        throw Error(ErrorCode::RangeOutOfBounds, fmt::format("visual cols [{}, {}) invalid for {} cols",
                                                             visual_cols.begin, visual_cols.end, full_map.cols));
    }
    std::vector<float> out(visual_cols.size());
    kernels::column_means_parallel(full_map, text_rows, visual_cols, out);
    return out;
}

}  // namespace adatp
