#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "belief.hpp"
#include "graph.hpp"

namespace eex {

enum class StepPolicy : uint8_t { kBacktracking = 0, kLipschitz = 1 };
enum class LipschitzRule : uint8_t { kPaper = 0, kConservative = 1 };

struct ModelParams {
  double alpha = 10.0;
  double c = 0.0;
  int clip_size = 8;
  int inner_steps = 1;
  int max_supersteps = 30;
  double tol = 1e-4;
  StepPolicy step_policy = StepPolicy::kBacktracking;
  LipschitzRule lipschitz_rule = LipschitzRule::kPaper;

  void validate() const;  // throws UsageError
};

StepPolicy parse_step_policy(const std::string& s);
LipschitzRule parse_lipschitz_rule(const std::string& s);

double sigmoid(double x);
double log_sigmoid(double x);  // stable for |x| up to ~1e4

// Total probability that the two endpoints share a label of one type,
// scaled by the effective per-type edge weight.
inline double edge_affinity(const SparseVec& fu, const SparseVec& fv, double type_weight = 1.0) {
  return type_weight * sparse_dot(fu, fv);
}

// log sigmoid(alpha * sum_t affinity_t + c) for one edge. `type_weights`
// holds the effective per-type weights (one per type).
double edge_logscore(std::span<const SparseVec> fu, std::span<const SparseVec> fv,
                     std::span<const double> type_weights, const ModelParams& params);

// Sum of edge_logscore over all undirected edges, each counted once.
double objective(const Graph& graph, const BeliefState& state, const ModelParams& params);

// Node-local objective: the sum over u's incident edges. Block moves of
// f_u change the global objective by exactly this amount.
double node_objective(const Graph& graph, int32_t u, const BeliefState& snapshot,
                      std::span<const SparseVec> fu, const ModelParams& params);

// Gradient of the node-local objective with respect to f_u, one sparse
// vector per type. Support is restricted to labels carried by some
// neighbor (the gradient is exactly zero elsewhere).
std::vector<SparseVec> node_gradient(const Graph& graph, int32_t u, const BeliefState& snapshot,
                                     std::span<const SparseVec> fu, const ModelParams& params);

// Euclidean projection onto the probability simplex via sort/threshold.
// Zero coordinates are dropped from the sparse result. Throws UsageError
// on empty input.
SparseVec project_simplex(const SparseVec& v);

// Optimal k-sparse projection: zero all but the k largest values (ties to
// the smaller label index), then project the survivors.
SparseVec project_simplex_ksparse(const SparseVec& v, int k);

// One block-coordinate update: `inner_steps` proximal gradient steps on
// f_u against the frozen neighbor snapshot, with per-type clip_size-sparse
// simplex projections. Clamped types pass through untouched. With the
// backtracking policy the node-local objective never decreases. If
// `inner_trace` is given it receives the objective before the first step
// and after each step.
std::vector<SparseVec> solve_node(const Graph& graph, int32_t u, const BeliefState& snapshot,
                                  std::span<const SparseVec> fu, std::span<const uint8_t> clamped,
                                  const ModelParams& params,
                                  std::vector<double>* inner_trace = nullptr);

// Step-size denominator for the fixed-step rule.
double lipschitz_constant(const ModelParams& params, int32_t degree);

}  // namespace eex
