#pragma once

#include <cstdint>
#include <vector>

#include "belief.hpp"
#include "edge_explain.hpp"
#include "graph.hpp"

namespace eex {

enum class Mode : uint8_t { kLabelPropagation = 0, kEdgeExplain = 1 };

struct SuperstepReport {
  int superstep = 0;
  double max_change = 0.0;   // max per-(node,type) L1 change this superstep
  double objective = 0.0;    // edge-explain objective, or total LP energy in lp mode
  double millis = 0.0;
  int64_t messages = 0;      // (node, type, entry) tuples published
};

struct InferenceResult {
  BeliefState beliefs;
  std::vector<SuperstepReport> reports;
};

// Bulk-synchronous Jacobi inference: each superstep recomputes every
// unclamped node strictly from the previous superstep's snapshot, so the
// result is identical for any worker count. Stops when the max L1 change
// drops below params.tol or the superstep budget is exhausted.
InferenceResult run_inference(const Graph& graph, const ObservedLabels& observed,
                              const ModelParams& params, Mode mode, int threads = 1);

// Multi-type label propagation entry point (Jacobi sweeps of lp_update).
InferenceResult run_label_propagation(const Graph& graph, const ObservedLabels& observed,
                                      const ModelParams& params, int threads = 1);

// Sequential sweeps in node-index order with immediately visible updates;
// params.max_supersteps counts sweeps. Appends the global objective to
// `objective_trace` (if given) before the first update and after every
// node update. With backtracking steps the trace never decreases.
InferenceResult gauss_seidel(const Graph& graph, const ObservedLabels& observed,
                             const ModelParams& params,
                             std::vector<double>* objective_trace = nullptr);

}  // namespace eex
