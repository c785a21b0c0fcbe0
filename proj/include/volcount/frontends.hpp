// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "volcount/model.hpp"

namespace volcount {

/// Enhanced DIMACS: `p cnf v lc B C N L` header, `m i a1 .. an op b`
/// constraint lines, zero-terminated clause lines, `c` comments.
/// Throws ParseError.
Formula parse_volce(std::string_view text);

/// Serializes in the same grammar; parse_volce(print_volce(f)) == f for
/// formulas without auxiliary variables.
std::string print_volce(const Formula& formula);

/// SMT-LIBv2 subset (declare-fun, assert, let, and/or/not/=>/ite, linear
/// arithmetic, comparisons, distinct). Throws ParseError.
Formula parse_smt2(std::string_view text);

/// `.smt2` goes to parse_smt2, anything else to parse_volce.
Formula parse_file(const std::filesystem::path& path);

}  // namespace volcount
