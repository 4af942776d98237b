// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adatp::kernels {

double cosine_unchecked(std::span<const float> a, std::span<const float> b) {
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i];
        const double y = b[i];
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0.0 || nb == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

namespace {

inline float column_mean(const MatrixView& m, IndexRange rows, std::size_t col) {
    double acc = 0.0;
    for (std::size_t r = rows.begin; r < rows.end; ++r) {
        acc += m.at(r, col);
    }
    return static_cast<float>(acc / static_cast<double>(rows.size()));
}

inline double position_sum(std::span<const float> scores, std::size_t n, std::size_t c, std::size_t p) {
    double acc = 0.0;
    for (std::size_t f = 0; f < n; ++f) {
        acc += scores[f * c + p];
    }
    return acc;
}

inline double frame_sum(std::span<const float> scores, std::size_t c, std::size_t f) {
    double acc = 0.0;
    for (std::size_t p = 0; p < c; ++p) {
        acc += scores[f * c + p];
    }
    return acc;
}

}  // namespace

void column_means_serial(const MatrixView& m, IndexRange rows, IndexRange cols, std::span<float> out) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out[j] = column_mean(m, rows, cols.begin + j);
    }
}

void column_means_parallel(const MatrixView& m, IndexRange rows, IndexRange cols, std::span<float> out) {
    const auto count = static_cast<std::ptrdiff_t>(cols.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < count; ++j) {
        out[j] = column_mean(m, rows, cols.begin + static_cast<std::size_t>(j));
    }
}

void position_sums_serial(std::span<const float> scores, std::size_t n, std::size_t c, std::span<double> out) {
    for (std::size_t p = 0; p < c; ++p) {
        out[p] = position_sum(scores, n, c, p);
    }
}

void position_sums_parallel(std::span<const float> scores, std::size_t n, std::size_t c, std::span<double> out) {
    const auto count = static_cast<std::ptrdiff_t>(c);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < count; ++p) {
        out[p] = position_sum(scores, n, c, static_cast<std::size_t>(p));
    }
}

void frame_sums_serial(std::span<const float> scores, std::size_t n, std::size_t c, std::span<double> out) {
    for (std::size_t f = 0; f < n; ++f) {
        out[f] = frame_sum(scores, c, f);
    }
}

void frame_sums_parallel(std::span<const float> scores, std::size_t n, std::size_t c, std::span<double> out) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t f = 0; f < count; ++f) {
        out[f] = frame_sum(scores, c, static_cast<std::size_t>(f));
    }
}

void row_cosines_serial(std::span<const float> rows, std::size_t dim, std::span<const float> ref,
                        std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = cosine_unchecked(rows.subspan(i * dim, dim), ref);
    }
}

void row_cosines_parallel(std::span<const float> rows, std::size_t dim, std::span<const float> ref,
                          std::span<double> out) {
    const auto count = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto row = static_cast<std::size_t>(i);
        out[row] = cosine_unchecked(rows.subspan(row * dim, dim), ref);
    }
}

}  // namespace adatp::kernels
