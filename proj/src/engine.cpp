#include "engine.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "propagation.hpp"

namespace eex {

namespace {

double total_lp_energy(const Graph& graph, const BeliefState& state) {
  double total = 0.0;
  for (int32_t t = 0; t < state.num_types(); ++t) total += lp_energy(graph, state, t);
  return total;
}

double mode_objective(const Graph& graph, const BeliefState& state, const ModelParams& params,
                      Mode mode) {
  return mode == Mode::kEdgeExplain ? objective(graph, state, params)
                                    : total_lp_energy(graph, state);
}

// Updates nodes striped over workers; per-node change goes to `changes` so
// the reduction below is order-independent.
void run_superstep(const Graph& graph, const BeliefState& snapshot, BeliefState& next,
                   const ModelParams& params, Mode mode, int threads,
                   std::vector<double>& changes) {
  const int32_t n = graph.num_nodes();
  const int32_t num_types = snapshot.num_types();
  const auto work = [&](int worker) {
    for (int32_t u = worker; u < n; u += threads) {
      double change = 0.0;
      if (snapshot.any_unclamped(u)) {
        if (mode == Mode::kEdgeExplain) {
          auto updated = solve_node(graph, u, snapshot, snapshot.node_view(u),
                                    snapshot.clamp_view(u), params);
          for (int32_t t = 0; t < num_types; ++t) {
            if (snapshot.clamped(u, t)) continue;
            change = std::max(change, l1_distance(updated[t], snapshot.dist(u, t)));
            next.mutable_dist(u, t) = std::move(updated[t]);
          }
        } else {
          for (int32_t t = 0; t < num_types; ++t) {
            if (snapshot.clamped(u, t)) continue;
            SparseVec updated = lp_update(graph, u, t, snapshot, params.clip_size);
            change = std::max(change, l1_distance(updated, snapshot.dist(u, t)));
            next.mutable_dist(u, t) = std::move(updated);
          }
        }
      }
      changes[u] = change;
    }
  };
  if (threads <= 1) {
    work(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
  for (auto& th : pool) th.join();
}

}  // namespace

InferenceResult run_inference(const Graph& graph, const ObservedLabels& observed,
                              const ModelParams& params, Mode mode, int threads) {
  params.validate();
  if (threads < 1) threads = 1;

  InferenceResult result;
  result.beliefs = BeliefState::from_observed(observed);
  BeliefState next = result.beliefs;
  std::vector<double> changes(graph.num_nodes(), 0.0);

  for (int step = 1; step <= params.max_supersteps; ++step) {
    const auto started = std::chrono::steady_clock::now();
    const int64_t messages = result.beliefs.entry_count();

    run_superstep(graph, result.beliefs, next, params, mode, threads, changes);
    std::swap(result.beliefs, next);

    double max_change = 0.0;
    for (double c : changes) max_change = std::max(max_change, c);

    SuperstepReport report;
    report.superstep = step;
    report.max_change = max_change;
    report.objective = mode_objective(graph, result.beliefs, params, mode);
    report.messages = messages;
    report.millis = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    result.reports.push_back(report);

    if (max_change < params.tol) break;
  }
  return result;
}

InferenceResult run_label_propagation(const Graph& graph, const ObservedLabels& observed,
                                      const ModelParams& params, int threads) {
  return run_inference(graph, observed, params, Mode::kLabelPropagation, threads);
}

InferenceResult gauss_seidel(const Graph& graph, const ObservedLabels& observed,
                             const ModelParams& params, std::vector<double>* objective_trace) {
  params.validate();
  InferenceResult result;
  result.beliefs = BeliefState::from_observed(observed);
  BeliefState& state = result.beliefs;
  if (objective_trace) objective_trace->push_back(objective(graph, state, params));

  for (int sweep = 1; sweep <= params.max_supersteps; ++sweep) {
    const auto started = std::chrono::steady_clock::now();
    double max_change = 0.0;
    for (int32_t u = 0; u < graph.num_nodes(); ++u) {
      if (!state.any_unclamped(u)) continue;
      auto updated =
          solve_node(graph, u, state, state.node_view(u), state.clamp_view(u), params);
      for (int32_t t = 0; t < state.num_types(); ++t) {
        if (state.clamped(u, t)) continue;
        max_change = std::max(max_change, l1_distance(updated[t], state.dist(u, t)));
        state.mutable_dist(u, t) = std::move(updated[t]);
      }
      if (objective_trace) objective_trace->push_back(objective(graph, state, params));
    }
    SuperstepReport report;
    report.superstep = sweep;
    report.max_change = max_change;
    report.objective = objective(graph, state, params);
    report.messages = state.entry_count();
    report.millis = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    result.reports.push_back(report);
    if (max_change < params.tol) break;
  }
  return result;
}

}  // namespace eex
