// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exact per-bunch backends: real volume by the divergence-theorem recursion
// and integer point counting by branch and bound.

#include <optional>
#include <vector>

#include "volcount/errors.hpp"
#include "volcount/lp.hpp"
#include "volcount/model.hpp"

namespace volcount {

/// Row i of a system made tight: the eliminated variable is solved from it
/// and substituted into the remaining rows.
struct FaceRestriction {
  LinearSystem reduced;
  int eliminated = -1;
  /// ‖a_i‖ / |a_ik|; face measure = scale · vol(reduced).
  double scale = 1;
  /// Index in the input system of each row of `reduced`.
  std::vector<int> source_rows;
};

/// nullopt when row i has no usable pivot or the substitution leaves a
/// contradictory constant row.
std::optional<FaceRestriction> face_restrict(const LinearSystem& system, int i);

/// Lebesgue measure. Strictness and deferred inequations are ignored; any
/// equality row or a flat body gives 0. Throws UnboundedError.
double exact_volume(const Polytope& p, const Deadline& deadline = {});
double exact_volume(const LinearSystem& system, const Deadline& deadline = {});

/// Number of integer points of p avoiding every hyperplane in `neqs`.
/// Throws UnboundedError when the set is infinite.
BigInt count_integer_points(const Polytope& p, const std::vector<PolyRow>& neqs,
                            const Deadline& deadline = {});

}  // namespace volcount
