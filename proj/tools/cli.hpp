// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <span>
#include <string>

namespace adatp {

/// Runs the `adatp` command line. args[0] is the program name.
/// Returns 0 on success, 2 for bad flags, 3 for bad input files, 4 for invariant failures.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace adatp
