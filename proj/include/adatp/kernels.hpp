// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops. Every kernel has a `_serial` reference and an
// OpenMP `_parallel` variant; both accumulate each output element in the same
// order, so their results are bit-identical and tests compare them exactly.

#pragma once

#include <cstddef>
#include <span>

#include "adatp/dump_io.hpp"

namespace adatp::kernels {

/// Cosine of two equal-length vectors accumulated in double. NaN if either norm is zero.
double cosine_unchecked(std::span<const float> a, std::span<const float> b);

// out[j] = mean_{i in rows} m(i, cols.begin + j)
void column_means_serial(const MatrixView& m, IndexRange rows, IndexRange cols, std::span<float> out);
void column_means_parallel(const MatrixView& m, IndexRange rows, IndexRange cols, std::span<float> out);

// out[p] = sum_f scores[f*c + p]
void position_sums_serial(std::span<const float> scores, std::size_t n, std::size_t c, std::span<double> out);
void position_sums_parallel(std::span<const float> scores, std::size_t n, std::size_t c, std::span<double> out);

// out[f] = sum_p scores[f*c + p]
void frame_sums_serial(std::span<const float> scores, std::size_t n, std::size_t c, std::span<double> out);
void frame_sums_parallel(std::span<const float> scores, std::size_t n, std::size_t c, std::span<double> out);

// out[i] = cosine_unchecked(rows[i*dim .. (i+1)*dim), ref)
void row_cosines_serial(std::span<const float> rows, std::size_t dim, std::span<const float> ref,
                        std::span<double> out);
void row_cosines_parallel(std::span<const float> rows, std::size_t dim, std::span<const float> ref,
                          std::span<double> out);

}  // namespace adatp::kernels
