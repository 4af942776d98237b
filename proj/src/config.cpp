// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "adatp/config.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "adatp/error.hpp"

namespace adatp {

std::string_view to_string(CapMode mode) {
    return mode == CapMode::RetainedBudget ? "retained-budget" : "visual-tokens";
}

CapMode cap_mode_from_string(std::string_view s) {
    if (s == "retained-budget") {
        return CapMode::RetainedBudget;
    }
    if (s == "visual-tokens") {
        return CapMode::VisualTokens;
    }
    throw Error(ErrorCode::InvalidConfig, fmt::format("unknown cap mode '{}'", s));
}

void AdaTPConfig::validate() const {
    auto check = [](bool ok, std::string_view field, double value, std::string_view rule) {
        if (!ok) {
            throw Error(ErrorCode::InvalidConfig, fmt::format("{} = {} must be {}", field, value, rule));
        }
    };
    check(std::isfinite(tau_s) && tau_s >= -1.0 && tau_s <= 1.0, "tau_s", tau_s, "in [-1, 1]");
    check(std::isfinite(tau_t) && tau_t >= -1.0 && tau_t <= 1.0, "tau_t", tau_t, "in [-1, 1]");
    check(std::isfinite(alpha_boost) && alpha_boost >= 1.0, "alpha_boost", alpha_boost, ">= 1");
    check(std::isfinite(gamma_cap) && gamma_cap > 0.0 && gamma_cap <= 1.0, "gamma_cap", gamma_cap, "in (0, 1]");
    check(std::isfinite(p) && p > 0.0, "p", p, "> 0");
    check(keep_last_layers >= 1, "keep_last_layers", keep_last_layers, ">= 1");
}

}  // namespace adatp
