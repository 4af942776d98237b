// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/bias_output.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "adatp/error.hpp"

namespace adatp {

namespace {

void append_rows(std::string& out, const std::string& label, const BiasReport& report) {
    for (const auto& lb : report) {
        out += fmt::format("{},{},{},{},{},{}\n", label, lb.layer, lb.global.end_fraction, lb.global.head_fraction,
                           lb.local.peak_ratio, lb.local.peak_pos);
    }
}

void check_width(std::uint32_t grid_width) {
    if (grid_width == 0) {
        throw Error(ErrorCode::InvalidConfig, "grid width must be positive");
    }
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

// Maps 0..1 to a white-to-red ramp.
std::string heat_color(double t) {
    const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(t, 0.0, 1.0))));
    return fmt::format("#ff{:02x}{:02x}", fade, fade);
}

}  // namespace

std::string bias_layers_csv(std::span<const NamedBiasReport> samples) {
    std::string out = "sample,layer,end_fraction,head_fraction,peak_ratio,peak_pos\n";
    for (const auto& s : samples) {
        append_rows(out, s.sample, s.report);
    }
    if (samples.size() > 1) {
        std::vector<BiasReport> reports;
        for (const auto& s : samples) {
            reports.push_back(s.report);
        }
        append_rows(out, std::string(kCorpusMeanLabel), corpus_mean(reports));
    }
    return out;
}

std::string position_grid_csv(const BiasReport& report, std::uint32_t grid_width) {
    check_width(grid_width);
    std::string out = "layer,row";
    for (std::uint32_t col = 0; col < grid_width; ++col) {
        out += fmt::format(",col{}", col);
    }
    out += '\n';
    for (const auto& lb : report) {
        const auto& sums = lb.local.position_sums;
        for (std::size_t row = 0; row * grid_width < sums.size(); ++row) {
            out += fmt::format("{},{}", lb.layer, row);
            for (std::uint32_t col = 0; col < grid_width; ++col) {
                const std::size_t p = row * grid_width + col;
                out += p < sums.size() ? fmt::format(",{}", sums[p]) : std::string(",");
            }
            out += '\n';
        }
    }
    return out;
}

std::string frame_bar_svg(std::span<const double> frame_sums, const std::string& title) {
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 240.0;
    constexpr double kTop = 24.0;
    const double peak = frame_sums.empty() ? 0.0 : *std::max_element(frame_sums.begin(), frame_sums.end());
    const double slot = frame_sums.empty() ? kWidth : kWidth / double(frame_sums.size());

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", kWidth,
        kHeight + kTop, kWidth, kHeight + kTop);
    out += fmt::format("<title>{}</title>\n", escape_xml(title));
    out += fmt::format("<text x=\"4\" y=\"16\" font-size=\"12\">{}</text>\n", escape_xml(title));
    for (std::size_t f = 0; f < frame_sums.size(); ++f) {
        const double h = peak > 0.0 ? kHeight * frame_sums[f] / peak : 0.0;
        out += fmt::format(
            "<rect class=\"bar\" data-frame=\"{}\" data-value=\"{}\" x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" "
            "height=\"{:.3f}\" fill=\"#4a78b5\"/>\n",
            f, frame_sums[f], double(f) * slot + 0.1 * slot, kTop + kHeight - h, 0.8 * slot, h);
    }
    out += "</svg>\n";
    return out;
}

std::string position_heat_svg(std::span<const double> position_sums, std::uint32_t grid_width,
                              const std::string& title) {
    check_width(grid_width);
    constexpr double kCell = 20.0;
    constexpr double kTop = 24.0;
    const std::size_t rows = (position_sums.size() + grid_width - 1) / grid_width;
    std::size_t peak_pos = 0;
    for (std::size_t p = 1; p < position_sums.size(); ++p) {
        if (position_sums[p] > position_sums[peak_pos]) {
            peak_pos = p;
        }
    }
    const double peak = position_sums.empty() ? 0.0 : position_sums[peak_pos];

    const double width = kCell * grid_width;
    const double height = kCell * double(rows) + kTop;
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", width,
        height, width, height);
    out += fmt::format("<title>{}</title>\n", escape_xml(title));
    out += fmt::format("<text x=\"4\" y=\"16\" font-size=\"12\">{}</text>\n", escape_xml(title));
    for (std::size_t p = 0; p < position_sums.size(); ++p) {
        const double t = peak > 0.0 ? position_sums[p] / peak : 0.0;
        out += fmt::format(
            "<rect class=\"{}\" data-pos=\"{}\" data-value=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" "
            "fill=\"{}\"/>\n",
            p == peak_pos ? "cell peak" : "cell", p, position_sums[p], kCell * double(p % grid_width),
            kTop + kCell * double(p / grid_width), kCell, kCell, heat_color(t));
    }
    out += "</svg>\n";
    return out;
}

}  // namespace adatp
