#pragma once

#include <cstdint>

#include "belief.hpp"
#include "graph.hpp"

namespace eex {

// Quadratic disagreement energy for one label type:
//   1/2 * sum over edges of w_uv * sum_l (f_ul - f_vl)^2
// Absent sparse entries count as zero.
double lp_energy(const Graph& graph, const BeliefState& state, int32_t type);

// Fixed-point update for one (node, type): the weighted average of the
// neighbor distributions, restricted to neighbors that have one. Returns
// empty (abstain) when no neighbor has a distribution for the type. The
// result is clipped to clip_size entries and renormalized.
SparseVec lp_update(const Graph& graph, int32_t u, int32_t type, const BeliefState& snapshot,
                    int clip_size);

}  // namespace eex
